#include "dioph/io/json.hpp"

#include "dioph/numerics/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace dioph::io {

namespace {

std::string decimal(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string cell(const WeightedValue& v) {
    if (v.value().is_exact()) return to_string(v.value().exact_value());
    return decimal(v.approx());
}

}  // namespace

Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

Json to_json(const Rational& x) { return to_string(x); }
Json to_json(const Integer& x) { return to_string(x); }

Json to_json(const CertReal& x) {
    if (x.is_exact()) return to_string(x.exact_value());
    Json j;
    j["repr"] = x.repr();
    j["approx"] = number(x.approx());
    return j;
}

Json to_json(const IntVector& v) {
    Json j = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

Json to_json(const RatVector& v) {
    Json j = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(to_json(v[i]));
    return j;
}

Json to_json(const CertVector& v) {
    Json j = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(to_json(v[i]));
    return j;
}

Json to_json(const WeightedValue& v) { return to_json(v.value()); }

Json to_json(const WeightVector& w) { return w.str(); }

Json to_json(const Scale& T) { return T.str(); }

Json to_json(const Witness& w) {
    Json j;
    j["T"] = to_json(w.T);
    j["rate"] = to_json(w.rate);
    j["log_error"] = number(w.log_error);
    if (!w.symbolic.empty()) {
        j["symbolic"] = w.symbolic;
    } else {
        j["q"] = to_json(w.q);
        j["p"] = to_json(w.p);
    }
    return j;
}

Json to_json(const ExponentEstimate& e) {
    Json j;
    j["kind"] = e.kind.str();
    j["method"] = e.method;
    j["lower_bound"] = to_json(e.lower_bound);
    j["point_estimate"] = number(e.point_estimate);
    j["capped"] = e.capped;
    j["witnessed_max"] = number(e.witnessed_max);
    j["T_min"] = to_json(e.T_min);
    j["T_max"] = to_json(e.T_max);
    j["tail_begin"] = e.tail_begin;
    Json ws = Json::array();
    for (const auto& w : e.witnesses) ws.push_back(to_json(w));
    j["witnesses"] = std::move(ws);
    return j;
}

Json to_json(const EstimatePair& e) {
    Json j;
    j["ordinary"] = to_json(e.ordinary);
    j["uniform"] = to_json(e.uniform);
    return j;
}

Json to_json(const BestApproxSequence& seq) {
    Json j;
    j["exhausted_up_to"] = to_json(seq.exhausted_up_to);
    j["enumerated"] = seq.enumerated;
    j["ends_in_zero"] = seq.ends_in_zero;
    if (seq.unit_shell_min) j["unit_shell_min"] = to_json(*seq.unit_shell_min);
    Json es = Json::array();
    for (const auto& e : seq.entries) {
        Json x;
        x["X"] = to_json(e.X);
        x["p"] = to_json(e.p_witness);
        x["Y"] = to_json(e.Y);
        x["M"] = to_json(e.M);
        es.push_back(std::move(x));
    }
    j["entries"] = std::move(es);
    return j;
}

Json to_json(const ExtRational& x) { return x.str(); }

Json to_json(const TransferReport& rep) {
    Json j;
    j["instance"] = rep.instance;
    j["bound"] = to_json(rep.bound);
    j["verdict"] = to_string(rep.verdict);
    j["slack"] = number(rep.slack);
    j["tolerance"] = number(rep.tolerance);
    if (!rep.note.empty()) j["note"] = rep.note;
    Json es = Json::object();
    for (const auto& e : rep.estimates) es[e.label] = to_json(e.estimate);
    j["estimates"] = std::move(es);
    Json cs = Json::array();
    for (const auto& c : rep.checks) {
        Json x;
        x["name"] = c.name;
        x["bound"] = to_json(c.bound);
        x["measured"] = number(c.measured);
        x["slack"] = number(c.slack);
        x["holds"] = c.holds;
        cs.push_back(std::move(x));
    }
    j["checks"] = std::move(cs);
    if (!rep.samples.empty()) {
        Json ss = Json::array();
        for (const auto& s : rep.samples) {
            Json x;
            x["index"] = s.index;
            x["theta"] = to_json(s.theta);
            x["lower_bound"] = number(s.lower_bound);
            x["point_estimate"] = number(s.point_estimate);
            x["capped"] = s.capped;
            x["lower_ok"] = s.lower_ok;
            x["within"] = s.within;
            if (!s.note.empty()) x["note"] = s.note;
            ss.push_back(std::move(x));
        }
        j["samples"] = std::move(ss);
        j["fraction_within"] = number(rep.fraction_within);
    }
    return j;
}

Json to_json(const CantorState& st) {
    Json j;
    j["alpha"] = to_json(st.alpha);
    j["R"] = to_json(st.R);
    j["c"] = to_json(st.c);
    j["depth"] = st.depth;
    j["constraints_ok"] = st.constraints_ok;
    j["theta"] = to_json(st.theta);
    Json ds = Json::array();
    for (const auto& d : st.distances) ds.push_back(to_json(d));
    j["distances"] = std::move(ds);
    Json ls = Json::array();
    for (const auto& l : st.levels) {
        Json x;
        x["k"] = l.k;
        x["Y"] = to_json(l.Y);
        Json side = Json::array();
        for (const auto& s : l.side) side.push_back(to_json(s));
        x["side"] = std::move(side);
        x["corner"] = to_json(l.corner);
        x["children"] = to_json(l.children);
        x["survivors"] = to_json(l.survivors);
        x["survivor_bound"] = number(l.survivor_bound.approx());
        x["children_bound"] = number(l.children_bound.approx());
        x["survivors_ok"] = l.survivors_ok;
        x["children_ok"] = l.children_ok;
        ls.push_back(std::move(x));
    }
    j["levels"] = std::move(ls);
    return j;
}

Json to_json(const WindowReport& w) {
    Json j;
    j["check_bound"] = to_json(w.check_bound);
    j["checked"] = w.checked;
    j["violations"] = w.violations;
    j["pass"] = w.pass();
    if (w.first_violation) j["first_violation"] = to_json(*w.first_violation);
    j["min_product"] = number(w.min_product);
    j["argmin"] = to_json(w.argmin);
    return j;
}

Json to_json(const BadCertificate& cert) {
    Json j;
    j["theta"] = to_json(cert.theta);
    j["depth"] = cert.depth;
    j["alpha"] = to_json(cert.alpha);
    j["R"] = to_json(cert.R);
    j["epsilon"] = to_json(cert.epsilon);
    Json sub = Json::array();
    for (auto i : cert.subsequence) sub.push_back(i);
    j["subsequence"] = std::move(sub);
    Json ys = Json::array();
    for (const auto& y : cert.ys) ys.push_back(to_json(y));
    j["ys"] = std::move(ys);
    j["cantor"] = to_json(cert.cantor);
    j["window"] = to_json(cert.window);
    if (!cert.caveat.empty()) j["caveat"] = cert.caveat;
    return j;
}

std::string sequence_csv(const BestApproxSequence& seq) {
    std::ostringstream out;
    const auto m = seq.entries.empty() ? 0 : seq.entries.front().X.size();
    const auto n = seq.entries.empty() ? 0 : seq.entries.front().p_witness.size();
    out << "k";
    for (Eigen::Index i = 0; i < m; ++i) out << ",X" << i + 1;
    for (Eigen::Index i = 0; i < n; ++i) out << ",p" << i + 1;
    out << ",Y,M\n";
    for (std::size_t k = 0; k < seq.entries.size(); ++k) {
        const auto& e = seq.entries[k];
        out << k;
        for (Eigen::Index i = 0; i < e.X.size(); ++i) out << ',' << e.X[i];
        for (Eigen::Index i = 0; i < e.p_witness.size(); ++i) out << ',' << e.p_witness[i];
        out << ',' << cell(e.Y) << ',' << cell(e.M) << '\n';
    }
    return out.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += "." + std::to_string(::getpid()) + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + tmp.string() + " for writing");
        f << content;
        f.flush();
        if (!f) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error("cannot rename onto " + path.string());
    }
}

}  // namespace dioph::io
