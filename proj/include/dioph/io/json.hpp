#pragma once

#include "dioph/badset/badset.hpp"
#include "dioph/bestapprox/bestapprox.hpp"
#include "dioph/exponents/exponents.hpp"
#include "dioph/transference/transference.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace dioph::io {

// Insertion-ordered so that identical inputs dump to identical bytes.
using Json = nlohmann::ordered_json;

Json to_json(const Rational& x);  // "p/q"
Json to_json(const Integer& x);   // decimal string
Json to_json(const CertReal& x);  // {"repr", "approx"} or the exact rational
Json to_json(const IntVector& v);
Json to_json(const RatVector& v);
Json to_json(const CertVector& v);
Json to_json(const WeightedValue& v);
Json to_json(const WeightVector& w);
Json to_json(const Scale& T);
Json to_json(const Witness& w);
Json to_json(const ExponentEstimate& e);
Json to_json(const EstimatePair& e);
Json to_json(const BestApproxSequence& seq);
Json to_json(const ExtRational& x);
Json to_json(const TransferReport& rep);
Json to_json(const CantorState& st);
Json to_json(const WindowReport& w);
Json to_json(const BadCertificate& cert);

// Non-finite doubles become the strings "inf", "-inf", "nan".
Json number(double x);

// X, p, Y, M per entry; Y exact when rational.
std::string sequence_csv(const BestApproxSequence& seq);

// Writes to a temporary file in the same directory and renames it over path.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace dioph::io
