#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dioph {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

// Enclosures still overlap at the precision cap.
struct PrecisionExhausted : Error {
    std::string comparison;
    explicit PrecisionExhausted(std::string what_)
        : Error("precision exhausted: " + what_), comparison(std::move(what_)) {}
};

struct BudgetExceeded : Error {
    std::uint64_t partial_count;
    BudgetExceeded(const std::string& where, std::uint64_t count)
        : Error("enumeration budget exceeded in " + where + " after " + std::to_string(count) +
                " candidates"),
          partial_count(count) {}
};

struct DegenerateRank : Error {
    std::vector<std::string> witness;  // integer coordinates as decimal strings
    bool certified;
    DegenerateRank(std::vector<std::string> w, bool cert)
        : Error(make_message(w, cert)), witness(std::move(w)), certified(cert) {}

private:
    static std::string make_message(const std::vector<std::string>& w, bool cert) {
        std::string s = cert ? "degenerate rank, witness (" : "numerically degenerate rank, witness (";
        for (std::size_t i = 0; i < w.size(); ++i) s += (i ? ", " : "") + w[i];
        return s + ")";
    }
};

}  // namespace dioph
