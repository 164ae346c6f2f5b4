#include "dioph/cli/cli.hpp"

#include "dioph/badset/badset.hpp"
#include "dioph/bestapprox/bestapprox.hpp"
#include "dioph/exponents/exponents.hpp"
#include "dioph/grassmann/grassmann.hpp"
#include "dioph/numerics/errors.hpp"
#include "dioph/numerics/sampling.hpp"
#include "dioph/transference/transference.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <sstream>

#ifndef DIOPH_VERSION
#define DIOPH_VERSION "0.0.0"
#endif

namespace dioph::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

const NamedConstant kPhi{"phi", "(1 + sqrt(5)) / 2, golden ratio, continued fraction [1; 1, 1, ...]"};
const NamedConstant kSqrt{"sqrt(D)", "positive square root of a squarefree integer D, exact linear form"};
const NamedConstant kLiouville{"liouville(b)", "sum over k >= 1 of b^(-k!), enclosed by truncation"};

std::vector<NamedConstant> constants_in(const std::vector<std::string>& entries) {
    bool phi = false, sq = false, li = false;
    for (const auto& e : entries) {
        phi |= e.find("phi") != std::string::npos;
        sq |= e.find("sqrt") != std::string::npos;
        li |= e.find("liouville") != std::string::npos;
    }
    std::vector<NamedConstant> out;
    if (phi) out.push_back(kPhi);
    if (sq) out.push_back(kSqrt);
    if (li) out.push_back(kLiouville);
    return out;
}

InstanceSpec scalar_instance(std::string name, std::string entry, std::string note) {
    InstanceSpec s;
    s.name = std::move(name);
    s.entries = {std::move(entry)};
    s.constants = constants_in(s.entries);
    s.note = std::move(note);
    return s;
}

EstimateOptions estimate_options(const RunConfig& cfg) {
    EstimateOptions o;
    o.grid.log2_min = cfg.log2_min;
    o.grid.log2_max = cfg.log2_max;
    o.grid.steps_per_octave = cfg.steps_per_octave;
    o.budget = cfg.budget;
    return o;
}

std::string log2_text(const Rational& e) { return "2^" + to_string(e); }

std::string fixed(double x, int digits = 6) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << x;
    return s.str();
}

void summary_line(std::ostringstream& s, const std::string& key, const std::string& value) {
    s << "  " << key << "  ";
    for (std::size_t i = key.size(); i < 22; ++i) s << ' ';
    s << value << '\n';
}

std::string estimate_text(const ExponentEstimate& e) {
    std::string t = e.capped ? ">= cap" : fixed(e.point_estimate, 4);
    return t + "  (certified >= " + fixed(to_double(e.lower_bound), 4) + ")";
}

std::string witness_csv(const std::vector<std::pair<std::string, const ExponentEstimate*>>& ests) {
    std::ostringstream out;
    out << "estimate,T,rate,log_error,q,p\n";
    for (const auto& [label, e] : ests) {
        for (const auto& w : e->witnesses) {
            auto vec = [](const IntVector& v) {
                std::string s;
                for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
                return s;
            };
            out << label << ',' << w.T.str() << ',' << to_string(w.rate) << ',' << io::number(w.log_error).dump()
                << ',' << (w.symbolic.empty() ? vec(w.q) : w.symbolic) << ',' << vec(w.p) << '\n';
        }
    }
    return out.str();
}

io::Json instance_json(const InstanceSpec& s) {
    io::Json j;
    j["name"] = s.name;
    j["m"] = s.m;
    j["n"] = s.n;
    j["entries"] = s.entries;
    j["weights_s"] = s.s;
    j["weights_r"] = s.r;
    j["theta"] = s.theta;
    if (!s.note.empty()) j["note"] = s.note;
    return j;
}

Outputs cmd_bestapprox(const RunConfig& cfg) {
    const auto& inst = cfg.instance;
    BestApproxOptions o;
    o.budget = cfg.budget;
    auto seq = compute_best_approx(target_matrix(inst), weights_s(inst), weights_r(inst), cfg.bound, o);
    Outputs out;
    out.report = io::to_json(seq);
    out.csv = io::sequence_csv(seq);
    std::ostringstream s;
    summary_line(s, "entries", std::to_string(seq.size()));
    summary_line(s, "exhausted up to", to_string(seq.exhausted_up_to));
    if (!seq.entries.empty()) {
        const auto& last = seq.entries.back();
        summary_line(s, "last Y", fixed(last.Y.approx(), 3));
        summary_line(s, "last M", std::to_string(last.M.approx()));
    }
    out.summary = s.str();
    return out;
}

Outputs cmd_exponents(const RunConfig& cfg) {
    const auto& inst = cfg.instance;
    auto A = target_matrix(inst);
    auto s = weights_s(inst), r = weights_r(inst);
    auto theta = theta_vector(inst);
    auto eo = estimate_options(cfg);
    EstimatePair pair;
    if (cfg.method == "sequence") {
        for (Eigen::Index i = 0; i < theta.size(); ++i)
            if (!theta[i].is_zero()) throw InvalidArgument("--method sequence needs theta = zero");
        BestApproxOptions bo;
        bo.budget = cfg.budget;
        Rational N = Rational(floor_int(pow(CertReal(2), cfg.log2_max)));
        pair = estimate_weighted(exponent_sequence(A, s, r, N, bo), eo);
    } else if (cfg.method == "grid") {
        pair = estimate_weighted(A, theta, s, r, eo);
    } else {
        throw InvalidArgument("unknown method '" + cfg.method + "'");
    }
    Outputs out;
    out.report = io::to_json(pair);
    out.csv = witness_csv({{"ordinary", &pair.ordinary}, {"uniform", &pair.uniform}});
    std::ostringstream t;
    summary_line(t, "omega", estimate_text(pair.ordinary));
    summary_line(t, "omega_hat", estimate_text(pair.uniform));
    out.summary = t.str();
    return out;
}

ExtRational parse_ext(const std::string& text) {
    if (text == "inf") return ExtRational::infinity();
    return ExtRational(parse_rational(text));
}

Outputs cmd_dyson(const RunConfig& cfg) {
    Outputs out;
    std::ostringstream t;
    if (cfg.omega) {
        DysonBoundInput in;
        in.m = cfg.dyson_m;
        in.n = cfg.dyson_n;
        in.s = WeightVector::parse(cfg.instance.s, in.m);
        in.r = WeightVector::parse(cfg.instance.r, in.n);
        in.omega = parse_ext(*cfg.omega);
        io::Json j;
        j["omega"] = in.omega.str();
        j["below_dirichlet"] = in.below_dirichlet();
        auto put = [&](const char* key, auto&& f) {
            try {
                auto b = f();
                j[key] = b.str();
                summary_line(t, key, b.str());
            } catch (const InvalidArgument&) {
                throw;
            } catch (const Error& e) {
                j[key] = io::Json{{"undefined", e.what()}};
                summary_line(t, key, "undefined");
            }
        };
        put("classical", [&] { return dyson_classical_bound(in.m, in.n, in.omega); });
        put("weighted_forward", [&] { return dyson_weighted_bound(in, Direction::forward); });
        put("weighted_backward", [&] { return dyson_weighted_bound(in, Direction::backward); });
        out.report = std::move(j);
    } else {
        TransferOptions o;
        o.estimate = estimate_options(cfg);
        o.tolerance = cfg.tolerance;
        const auto& inst = cfg.instance;
        auto rep = validate_dyson(target_matrix(inst), weights_s(inst), weights_r(inst), o, inst.name);
        out.report = io::to_json(rep);
        std::vector<std::pair<std::string, const ExponentEstimate*>> ests;
        for (const auto& e : rep.estimates) {
            ests.emplace_back(e.label, &e.estimate);
            summary_line(t, e.label, estimate_text(e.estimate));
        }
        out.csv = witness_csv(ests);
        for (const auto& c : rep.checks)
            summary_line(t, c.name, std::string(c.holds ? "holds" : "fails") + " (bound " + c.bound.str() + ")");
        summary_line(t, "verdict", to_string(rep.verdict));
    }
    out.summary = t.str();
    return out;
}

Outputs cmd_bl(const RunConfig& cfg) {
    const auto& inst = cfg.instance;
    TransferOptions o;
    o.estimate = estimate_options(cfg);
    o.tolerance = cfg.tolerance;
    auto thetas = low_discrepancy_points(cfg.theta_samples, inst.n, cfg.seed);
    auto rep = bl_validate(target_matrix(inst), weights_s(inst), weights_r(inst), thetas, o, inst.name);
    Outputs out;
    out.report = io::to_json(rep);
    std::ostringstream csv;
    csv << "index,theta,lower_bound,point_estimate,capped,lower_ok,within\n";
    for (const auto& s : rep.samples) {
        std::string th;
        for (Eigen::Index i = 0; i < s.theta.size(); ++i) th += (i ? " " : "") + to_string(s.theta[i]);
        csv << s.index << ',' << th << ',' << io::number(s.lower_bound).dump() << ','
            << io::number(s.point_estimate).dump() << ',' << s.capped << ',' << s.lower_ok << ',' << s.within
            << '\n';
    }
    out.csv = csv.str();
    std::ostringstream t;
    summary_line(t, "bound 1/omega_hat", rep.bound.str());
    summary_line(t, "samples", std::to_string(rep.samples.size()));
    summary_line(t, "fraction within", fixed(rep.fraction_within, 3));
    summary_line(t, "verdict", to_string(rep.verdict));
    if (!rep.note.empty()) summary_line(t, "note", rep.note);
    out.summary = t.str();
    return out;
}

Outputs cmd_intermediate(const RunConfig& cfg) {
    const auto& inst = cfg.instance;
    auto A = target_matrix(inst);
    CertVector alpha(A.size());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j) alpha[i * A.cols() + j] = A(i, j);
    CertVector theta;
    if (inst.theta != "zero") {
        auto parts = split(inst.theta, ';');
        theta.resize(static_cast<Eigen::Index>(parts.size()));
        for (std::size_t i = 0; i < parts.size(); ++i) theta[static_cast<Eigen::Index>(i)] = CertReal::parse(parts[i]);
    }
    GrassmannOptions go;
    go.estimate = estimate_options(cfg);
    if (cfg.norm == "sup") {
        go.norm = MultivectorNorm::sup;
    } else if (cfg.norm != "euclidean") {
        throw InvalidArgument("unknown norm '" + cfg.norm + "'");
    }
    auto pair = intermediate_exponents(alpha, cfg.d, theta, go);
    Outputs out;
    out.report = io::to_json(pair);
    out.csv = witness_csv({{"ordinary", &pair.ordinary}, {"uniform", &pair.uniform}});
    std::ostringstream t;
    summary_line(t, "d", std::to_string(cfg.d));
    summary_line(t, "omega_d", estimate_text(pair.ordinary));
    summary_line(t, "omega_hat_d", estimate_text(pair.uniform));
    out.summary = t.str();
    return out;
}

Outputs cmd_badgen(const RunConfig& cfg) {
    const auto& inst = cfg.instance;
    BadOptions bo;
    bo.budget = cfg.budget;
    bo.cantor.seed = cfg.seed;
    if (cfg.selector == "random") {
        bo.cantor.selector = Selector::random;
    } else if (cfg.selector != "first") {
        throw InvalidArgument("unknown selector '" + cfg.selector + "'");
    }
    auto cert = bad_certificate(target_matrix(inst), weights_s(inst), weights_r(inst), cfg.alpha, cfg.depth,
                                cfg.check_bound, bo);
    Outputs out;
    out.report = io::to_json(cert);
    std::ostringstream csv;
    csv << "k,Y,children,survivors,survivor_bound,survivors_ok\n";
    for (const auto& l : cert.cantor.levels)
        csv << l.k << ',' << io::number(l.Y.approx()).dump() << ',' << to_string(l.children) << ','
            << to_string(l.survivors) << ',' << io::number(l.survivor_bound.approx()).dump() << ','
            << l.survivors_ok << '\n';
    out.csv = csv.str();
    std::ostringstream t;
    std::string th;
    for (Eigen::Index i = 0; i < cert.theta.size(); ++i) th += (i ? ", " : "") + to_string(cert.theta[i]);
    summary_line(t, "theta", th);
    summary_line(t, "R", to_string(cert.R));
    summary_line(t, "epsilon", std::to_string(cert.epsilon.approx()));
    summary_line(t, "constraints", cert.cantor.constraints_ok ? "ok" : "violated");
    summary_line(t, "window checked", std::to_string(cert.window.checked));
    summary_line(t, "window", cert.window.pass() ? "pass" : "fail");
    summary_line(t, "min product", std::to_string(cert.window.min_product));
    out.summary = t.str();
    return out;
}

}  // namespace

const char* tool_version() { return DIOPH_VERSION; }

const std::vector<InstanceSpec>& corpus() {
    static const std::vector<InstanceSpec> c = [] {
        std::vector<InstanceSpec> v;
        v.push_back(scalar_instance("phi", "phi", "badly approximable, Fibonacci denominators"));
        v.push_back(scalar_instance("sqrt2", "sqrt(2)", "badly approximable, Pell denominators"));
        v.push_back(scalar_instance("sqrt3", "sqrt(3)", "badly approximable, period (1, 2)"));
        v.push_back(scalar_instance("liouville2", "liouville(2)", "Liouville number, infinite exponent"));
        v.push_back(scalar_instance("half", "1/2", "rational, degenerate rank"));
        InstanceSpec row;
        row.name = "sqrt2_sqrt3";
        row.m = 1;
        row.n = 2;
        row.entries = {"sqrt(2)", "sqrt(3)"};
        row.constants = constants_in(row.entries);
        row.note = "1 x 2, 1, sqrt2, sqrt3 linearly independent over Q";
        v.push_back(std::move(row));
        return v;
    }();
    return c;
}

InstanceSpec find_instance(const std::string& name) {
    for (const auto& s : corpus())
        if (s.name == name) return s;
    std::string known;
    for (const auto& s : corpus()) known += (known.empty() ? "" : ", ") + s.name;
    throw InvalidArgument("unknown instance '" + name + "' (known: " + known + ")");
}

InstanceSpec instance_from_matrix(const std::string& text) {
    InstanceSpec s;
    s.name = "custom";
    auto rows = split(text, ';');
    s.m = rows.size();
    s.n = 0;
    for (const auto& row : rows) {
        auto cols = split(row, ',');
        if (s.n == 0) s.n = cols.size();
        if (cols.size() != s.n) throw InvalidArgument("ragged matrix '" + text + "'");
        for (auto& c : cols) {
            if (c.empty()) throw InvalidArgument("empty matrix entry in '" + text + "'");
            s.entries.push_back(c);
        }
    }
    s.constants = constants_in(s.entries);
    return s;
}

TargetMatrix target_matrix(const InstanceSpec& spec) {
    if (spec.entries.size() != spec.m * spec.n) throw InvalidArgument("instance entry count does not match m x n");
    TargetMatrix A(static_cast<Eigen::Index>(spec.m), static_cast<Eigen::Index>(spec.n));
    for (std::size_t i = 0; i < spec.m; ++i)
        for (std::size_t j = 0; j < spec.n; ++j)
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = CertReal::parse(spec.entries[i * spec.n + j]);
    return A;
}

WeightVector weights_s(const InstanceSpec& spec) { return WeightVector::parse(spec.s, spec.m); }
WeightVector weights_r(const InstanceSpec& spec) { return WeightVector::parse(spec.r, spec.n); }

CertVector theta_vector(const InstanceSpec& spec) {
    CertVector t(static_cast<Eigen::Index>(spec.m));
    if (spec.theta == "zero") {
        for (Eigen::Index i = 0; i < t.size(); ++i) t[i] = CertReal(0);
        return t;
    }
    auto parts = split(spec.theta, ';');
    if (parts.size() != spec.m)
        throw InvalidArgument("theta '" + spec.theta + "' needs " + std::to_string(spec.m) + " entries");
    for (std::size_t i = 0; i < parts.size(); ++i) t[static_cast<Eigen::Index>(i)] = CertReal::parse(parts[i]);
    return t;
}

void apply_combined_weights(InstanceSpec& spec, const std::string& text) {
    std::string t = text;
    std::replace(t.begin(), t.end(), ',', ';');
    auto parts = split(t, ';');
    if (parts.size() != spec.m + spec.n)
        throw InvalidArgument("--weights needs m + n = " + std::to_string(spec.m + spec.n) + " entries");
    auto group = [&](std::size_t begin, std::size_t count) {
        std::vector<Rational> w;
        Rational total = 0;
        for (std::size_t i = begin; i < begin + count; ++i) {
            w.push_back(parse_rational(parts[i]));
            if (w.back() <= 0) throw InvalidArgument("weights must be positive");
            total += w.back();
        }
        for (auto& x : w) x /= total;
        return WeightVector(w).str();
    };
    spec.s = group(0, spec.m);
    spec.r = group(spec.m, spec.n);
}

Rational parse_log2_scale(const std::string& text) {
    if (text.rfind("2^", 0) == 0) {
        std::string e = text.substr(2);
        if (e.size() > 2 && e.front() == '(' && e.back() == ')') e = e.substr(1, e.size() - 2);
        return parse_rational(e);
    }
    Rational v = parse_rational(text);
    if (v < 1 || denom(v) != 1) throw InvalidArgument("scale '" + text + "' must be 2^e or a power of two");
    Integer x = numer(v);
    long k = 0;
    while (x > 1) {
        if (x % 2 != 0) throw InvalidArgument("scale '" + text + "' must be 2^e or a power of two");
        x /= 2;
        ++k;
    }
    return Rational(k);
}

int parse_tratio(const std::string& text) {
    if (text == "2") return 1;
    std::string e;
    if (text.rfind("2^(1/", 0) == 0 && text.back() == ')') {
        e = text.substr(5, text.size() - 6);
    } else if (text.rfind("2^1/", 0) == 0) {
        e = text.substr(4);
    } else {
        throw InvalidArgument("--tratio must be 2 or 2^(1/k)");
    }
    Rational k = parse_rational(e);
    if (k < 1 || denom(k) != 1 || k > 64) throw InvalidArgument("--tratio: k must be an integer in 1..64");
    return static_cast<int>(to_int64(numer(k)));
}

io::Json to_json(const RunConfig& cfg) {
    io::Json j;
    j["command"] = cfg.command;
    const bool bounds_only = cfg.command == "dyson" && cfg.omega;
    if (bounds_only) {
        j["m"] = cfg.dyson_m;
        j["n"] = cfg.dyson_n;
        j["weights_s"] = cfg.instance.s;
        j["weights_r"] = cfg.instance.r;
        j["omega"] = *cfg.omega;
        j["seed"] = cfg.seed;
        j["format"] = cfg.format;
        return j;
    }
    j["instance"] = instance_json(cfg.instance);
    if (cfg.command != "bestapprox" && cfg.command != "badgen") {
        j["grid"] = {{"tmin", log2_text(cfg.log2_min)},
                     {"tmax", log2_text(cfg.log2_max)},
                     {"steps_per_octave", cfg.steps_per_octave}};
    }
    j["budget"] = cfg.budget;
    j["precision"] = cfg.precision;
    j["seed"] = cfg.seed;
    j["format"] = cfg.format;
    if (cfg.command == "bestapprox") j["bound"] = to_string(cfg.bound);
    if (cfg.command == "exponents") j["method"] = cfg.method;
    if (cfg.command == "dyson" || cfg.command == "bl") j["tolerance"] = cfg.tolerance;
    if (cfg.command == "bl") j["theta_samples"] = cfg.theta_samples;
    if (cfg.command == "intermediate") {
        j["d"] = cfg.d;
        j["norm"] = cfg.norm;
    }
    if (cfg.command == "badgen") {
        j["alpha"] = to_string(cfg.alpha);
        j["depth"] = cfg.depth;
        j["check_bound"] = to_string(cfg.check_bound);
        j["selector"] = cfg.selector;
    }
    return j;
}

Outputs execute(const RunConfig& cfg) {
    if (cfg.budget == 0) throw InvalidArgument("budget must be positive");
    if (cfg.precision < 32) throw InvalidArgument("precision must be at least 32 bits");
    if (cfg.log2_min > cfg.log2_max) throw InvalidArgument("tmin exceeds tmax");
    const long saved = precision_cap();
    set_precision_cap(cfg.precision);
    Outputs out;
    try {
        if (cfg.command == "bestapprox") {
            out = cmd_bestapprox(cfg);
        } else if (cfg.command == "exponents") {
            out = cmd_exponents(cfg);
        } else if (cfg.command == "dyson") {
            out = cmd_dyson(cfg);
        } else if (cfg.command == "bl") {
            out = cmd_bl(cfg);
        } else if (cfg.command == "intermediate") {
            out = cmd_intermediate(cfg);
        } else if (cfg.command == "badgen") {
            out = cmd_badgen(cfg);
        } else {
            throw InvalidArgument("unknown command '" + cfg.command + "'");
        }
    } catch (...) {
        set_precision_cap(saved);
        throw;
    }
    set_precision_cap(saved);

    io::Json report;
    report["schema"] = kSchema;
    report["tool"] = {{"name", "dioph"}, {"version", tool_version()}};
    report["config"] = to_json(cfg);
    io::Json consts = io::Json::array();
    if (!(cfg.command == "dyson" && cfg.omega))
        for (const auto& c : cfg.instance.constants) consts.push_back({{"name", c.name}, {"definition", c.definition}});
    report["constants"] = std::move(consts);
    report["result"] = std::move(out.report);
    out.report = std::move(report);
    return out;
}

ExitCode exit_code_for(const std::exception& e) {
    if (dynamic_cast<const DegenerateRank*>(&e)) return ExitCode::degenerate_rank;
    if (dynamic_cast<const BudgetExceeded*>(&e)) return ExitCode::budget_exceeded;
    if (dynamic_cast<const PrecisionExhausted*>(&e)) return ExitCode::precision_exhausted;
    if (dynamic_cast<const InvalidArgument*>(&e)) return ExitCode::usage;
    return ExitCode::failure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weighted, inhomogeneous and intermediate Diophantine approximation experiments", "dioph"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1);
    app.footer(
        "Exit codes: 0 ok, 1 usage or invalid instance, 2 degenerate rank, 3 budget exhausted,\n"
        "4 precision exhausted, 5 other failure. Output directory: --out, else $DIOPH_OUT_DIR, else '.'.");

    RunConfig cfg;
    std::string instance, matrix, ws, wr, weights, theta, tmin = "2", tmax = "2^16", tratio = "2^(1/4)", bound,
                                                           alpha, check_bound, omega;
    bool weights_uniform = false;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--instance", instance, "named instance: phi, sqrt2, sqrt3, liouville2, half, sqrt2_sqrt3");
        sub->add_option("--matrix", matrix, "matrix entries, rows separated by ';', entries by ','");
        sub->add_option("--weights-s", ws, "weights on the m side: uniform, w(a;b), a;b");
        sub->add_option("--weights-r", wr, "weights on the n side");
        sub->add_option("--weights", weights, "relative weights a1;..;am;b1;..;bn, normalized per side");
        sub->add_option("--theta", theta, "zero, or entries separated by ';'");
        sub->add_option("--budget", cfg.budget, "enumeration budget")->capture_default_str();
        sub->add_option("--precision", cfg.precision, "precision cap in bits")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "seed for sampling and random choices")->capture_default_str();
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--format", cfg.format, "json, csv or both")
            ->check(CLI::IsMember({"json", "csv", "both"}))
            ->capture_default_str();
    };
    auto grid = [&](CLI::App* sub) {
        sub->add_option("--tmin", tmin, "smallest scale, 2^e")->capture_default_str();
        sub->add_option("--tmax", tmax, "largest scale, 2^e")->capture_default_str();
        sub->add_option("--tratio", tratio, "ratio of consecutive scales, 2^(1/k)")->capture_default_str();
    };

    auto* ba = app.add_subcommand("bestapprox", "best-approximation sequence");
    common(ba);
    ba->add_option("--bound", bound, "largest N(X) examined (default 1e6)");

    auto* ex = app.add_subcommand("exponents", "ordinary and uniform weighted exponents");
    common(ex);
    grid(ex);
    ex->add_option("--method", cfg.method, "grid or sequence")
        ->check(CLI::IsMember({"grid", "sequence"}))
        ->capture_default_str();

    auto* dy = app.add_subcommand("dyson", "Dyson transference bounds, or a check on an instance");
    common(dy);
    grid(dy);
    dy->add_option("--omega", omega, "exponent (rational or inf); evaluates the bounds only");
    dy->add_option("--m", cfg.dyson_m, "rows")->capture_default_str();
    dy->add_option("--n", cfg.dyson_n, "columns")->capture_default_str();
    dy->add_flag("--weights-uniform", weights_uniform, "uniform weights on both sides");
    dy->add_option("--tolerance", cfg.tolerance)->capture_default_str();

    auto* bl = app.add_subcommand("bl", "inhomogeneous transference check on sampled theta");
    common(bl);
    grid(bl);
    bl->add_option("--theta-samples", cfg.theta_samples, "number of low-discrepancy theta")->capture_default_str();
    bl->add_option("--tolerance", cfg.tolerance)->capture_default_str();

    auto* im = app.add_subcommand("intermediate", "intermediate exponents of the point with the instance entries");
    common(im);
    grid(im);
    im->add_option("--d", cfg.d, "subspace dimension")->capture_default_str();
    im->add_option("--norm", cfg.norm, "euclidean or sup")
        ->check(CLI::IsMember({"euclidean", "sup"}))
        ->capture_default_str();

    auto* bg = app.add_subcommand("badgen", "twisted badly approximable certificate");
    common(bg);
    bg->add_option("--alpha", alpha, "neighbourhood radius (default 0.2)");
    bg->add_option("--depth", cfg.depth, "levels of the construction")->capture_default_str();
    bg->add_option("--check-bound", check_bound, "window check bound (default 1e4)");
    bg->add_option("--selector", cfg.selector, "first or random")
        ->check(CLI::IsMember({"first", "random"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (app.exit(e, out, err) == 0) return 0;
        return static_cast<int>(ExitCode::usage);
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        const bool bounds_only = cfg.command == "dyson" && !omega.empty();
        if (bounds_only) {
            cfg.omega = omega;
            cfg.instance.name = "m" + std::to_string(cfg.dyson_m) + "n" + std::to_string(cfg.dyson_n);
            cfg.instance.m = cfg.dyson_m;
            cfg.instance.n = cfg.dyson_n;
            if (!instance.empty() || !matrix.empty())
                throw InvalidArgument("--omega evaluates bounds only; drop --instance and --matrix");
        } else if (!instance.empty() && !matrix.empty()) {
            throw InvalidArgument("give either --instance or --matrix");
        } else if (!instance.empty()) {
            cfg.instance = find_instance(instance);
        } else if (!matrix.empty()) {
            cfg.instance = instance_from_matrix(matrix);
        } else {
            throw InvalidArgument(cfg.command + " needs --instance or --matrix");
        }
        if (!weights.empty()) apply_combined_weights(cfg.instance, weights);
        if (weights_uniform) cfg.instance.s = cfg.instance.r = "uniform";
        if (!ws.empty()) cfg.instance.s = ws;
        if (!wr.empty()) cfg.instance.r = wr;
        if (!theta.empty()) cfg.instance.theta = theta;
        // Normalize so that equivalent spellings embed identically.
        cfg.instance.s = WeightVector::parse(cfg.instance.s, cfg.instance.m).str();
        cfg.instance.r = WeightVector::parse(cfg.instance.r, cfg.instance.n).str();
        cfg.log2_min = parse_log2_scale(tmin);
        cfg.log2_max = parse_log2_scale(tmax);
        cfg.steps_per_octave = parse_tratio(tratio);
        if (!bound.empty()) cfg.bound = parse_rational(bound);
        if (!alpha.empty()) cfg.alpha = parse_rational(alpha);
        if (!check_bound.empty()) cfg.check_bound = parse_rational(check_bound);
        if (cfg.out_dir.empty()) {
            const char* env = std::getenv("DIOPH_OUT_DIR");
            cfg.out_dir = env && *env ? env : ".";
        }

        Outputs res = execute(cfg);
        const std::filesystem::path dir(cfg.out_dir);
        const std::string stem = cfg.command + "-" + cfg.instance.name;
        out << "dioph " << tool_version() << "  " << cfg.command << "  " << cfg.instance.name << '\n' << res.summary;
        if (cfg.format != "csv") {
            auto p = dir / (stem + ".json");
            io::write_atomic(p, res.report.dump(2) + "\n");
            out << "  wrote " << p.string() << '\n';
        }
        if (cfg.format != "json" && !res.csv.empty()) {
            auto p = dir / (stem + ".csv");
            io::write_atomic(p, res.csv);
            out << "  wrote " << p.string() << '\n';
        }
        return 0;
    } catch (const std::exception& e) {
        err << "dioph: " << e.what() << '\n';
        return static_cast<int>(exit_code_for(e));
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("dioph");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace dioph::cli
