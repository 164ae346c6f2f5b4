#include "dioph/numerics/cert_real.hpp"

#include "dioph/numerics/errors.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <limits>
#include <mutex>
#include <utility>

namespace dioph {

namespace {

std::atomic<long> g_precision_cap{256};

long mag_bits(const Interval& I) {
    Rational m = std::max(abs(I.lo), abs(I.hi));
    if (m == 0) return 0;
    return std::max(0L, ilog2_abs(m) + 2);
}

Interval outward(const Interval& I, long bits) {
    if (I.lo == I.hi) return I;
    return {round_down_dyadic(I.lo, bits), round_up_dyadic(I.hi, bits)};
}

Rational pow2(long bits) {
    return bits >= 0 ? Rational(ipow(Integer(2), static_cast<unsigned long>(bits)))
                     : Rational(Integer(1), ipow(Integer(2), static_cast<unsigned long>(-bits)));
}

// n = f^2 * D with D squarefree; nullopt when n is too large to factor safely.
std::optional<std::pair<Integer, Integer>> squarefree_split(Integer n) {
    Integer f = 1, D = 1;
    for (unsigned long p = 2; p <= 100000; ++p) {
        Integer pp(p);
        if (pp * pp > n) break;
        while (n % (pp * pp) == 0) {
            n /= pp * pp;
            f *= pp;
        }
        if (n % pp == 0) {
            n /= pp;
            D *= pp;
        }
    }
    if (n > 1) {
        Integer r;
        if (is_perfect_power(n, 2, &r)) f *= r;
        else if (n <= Integer(10000000000LL)) D *= n;
        else return std::nullopt;
    }
    return std::make_pair(f, D);
}

void add_term(std::map<Integer, Rational>& m, const Integer& k, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = m.emplace(k, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) m.erase(it);
    }
}

LinearForm form_add(const LinearForm& a, const LinearForm& b) {
    LinearForm r = a;
    for (const auto& [k, c] : b.radicals) add_term(r.radicals, k, c);
    for (const auto& [k, c] : b.series) add_term(r.series, k, c);
    return r;
}

LinearForm form_scale(const LinearForm& a, const Rational& s) {
    LinearForm r;
    if (s == 0) return r;
    for (const auto& [k, c] : a.radicals) r.radicals.emplace(k, c * s);
    for (const auto& [k, c] : a.series) r.series.emplace(k, c * s);
    return r;
}

LinearForm form_rational(const Rational& v) {
    LinearForm r;
    add_term(r.radicals, Integer(1), v);
    return r;
}

std::optional<LinearForm> form_mul(const LinearForm& a, const LinearForm& b) {
    if (auto c = a.as_rational()) return form_scale(b, *c);
    if (auto c = b.as_rational()) return form_scale(a, *c);
    if (!a.series.empty() || !b.series.empty()) return std::nullopt;
    if (a.radicals.size() * b.radicals.size() > 256) return std::nullopt;
    LinearForm r;
    for (const auto& [d1, c1] : a.radicals)
        for (const auto& [d2, c2] : b.radicals) {
            // sqrt(d1 d2) = g sqrt(d1 d2 / g^2) with g = gcd(d1, d2), both squarefree
            Integer g = gcd(d1, d2);
            add_term(r.radicals, (d1 / g) * (d2 / g), c1 * c2 * Rational(g));
        }
    return r;
}

std::optional<LinearForm> form_inv(const LinearForm& a) {
    if (a.is_zero()) return std::nullopt;
    if (auto c = a.as_rational()) return form_rational(Rational(1) / *c);
    if (!a.series.empty()) return std::nullopt;
    // a0 + b sqrt(D)  ->  (a0 - b sqrt(D)) / (a0^2 - b^2 D)
    Rational a0 = 0, b = 0;
    Integer D = 0;
    for (const auto& [d, c] : a.radicals) {
        if (d == 1) {
            a0 = c;
        } else {
            if (D != 0) return std::nullopt;
            D = d;
            b = c;
        }
    }
    Rational norm = a0 * a0 - b * b * Rational(D);
    LinearForm r;
    add_term(r.radicals, Integer(1), a0 / norm);
    add_term(r.radicals, D, -b / norm);
    return r;
}

}  // namespace

std::optional<Rational> LinearForm::as_rational() const {
    if (!series.empty()) return std::nullopt;
    if (radicals.empty()) return Rational(0);
    if (radicals.size() == 1 && radicals.begin()->first == 1) return radicals.begin()->second;
    return std::nullopt;
}

namespace detail {

struct Node {
    virtual ~Node() = default;
    virtual Interval compute(long bits) const = 0;
    virtual std::string repr() const = 0;
    virtual const Rational* exact() const { return nullptr; }
    virtual std::optional<LiouvilleData> liouville() const { return std::nullopt; }
    virtual std::optional<PowerForm> power() const { return std::nullopt; }
    virtual std::optional<LinearForm> compute_form() const { return std::nullopt; }

    const std::optional<LinearForm>& form() const {
        std::call_once(form_once_, [this] { form_ = compute_form(); });
        return form_;
    }

    Interval eval(long bits) const {
        if (const Rational* v = exact()) return {*v, *v};
        std::lock_guard<std::mutex> lock(mu_);
        if (cached_ && cached_bits_ >= bits) return *cached_;
        Interval I = compute(bits);
        if (cached_) {
            if (cached_->lo > I.lo) I.lo = cached_->lo;
            if (cached_->hi < I.hi) I.hi = cached_->hi;
        }
        cached_ = I;
        cached_bits_ = bits;
        return I;
    }

private:
    mutable std::mutex mu_;
    mutable std::optional<Interval> cached_;
    mutable long cached_bits_ = -1;
    mutable std::once_flag form_once_;
    mutable std::optional<LinearForm> form_;
};

using NodePtr = std::shared_ptr<const Node>;

struct ExactNode : Node {
    Rational v;
    explicit ExactNode(Rational x) : v(std::move(x)) {}
    Interval compute(long) const override { return {v, v}; }
    std::string repr() const override { return to_string(v); }
    const Rational* exact() const override { return &v; }
    std::optional<LinearForm> compute_form() const override { return form_rational(v); }
    std::optional<PowerForm> power() const override {
        if (v < 0) return std::nullopt;
        return PowerForm{v, Rational(1)};
    }
};

// sqrt(a/b) = sqrt(a b) / b
std::optional<LinearForm> sqrt_form(const Rational& r) {
    auto split = squarefree_split(numer(r) * denom(r));
    if (!split) return std::nullopt;
    LinearForm f;
    add_term(f.radicals, split->second, Rational(split->first, denom(r)));
    return f;
}

struct SqrtNode : Node {
    Rational r;
    explicit SqrtNode(Rational x) : r(std::move(x)) {}
    Interval compute(long bits) const override {
        long k = bits + 2;
        Integer scaled = floor_int(r * pow2(2 * k));
        Integer s = iroot_floor(scaled, 2);
        Rational scale = pow2(k);
        return {Rational(s) / scale, Rational(s + 1) / scale};
    }
    std::string repr() const override { return "sqrt(" + to_string(r) + ")"; }
    std::optional<PowerForm> power() const override { return PowerForm{r, Rational(1, 2)}; }
    std::optional<LinearForm> compute_form() const override { return sqrt_form(r); }
};

struct LiouvilleNode : Node {
    Integer base;
    Rational coeff;
    LiouvilleNode(Integer b, Rational c) : base(std::move(b)), coeff(std::move(c)) {}
    Interval compute(long bits) const override {
        long lb = static_cast<long>(mpz_sizeinbase(base.backend().data(), 2)) - 1;  // floor log2
        Rational two_c = 2 * abs(coeff);
        long need = bits + std::max(0L, ilog2_abs(two_c) + 2);
        unsigned long K = 1, fact_next = 2;  // (K+1)!
        while (static_cast<long>(fact_next) * lb < need) {
            ++K;
            fact_next *= (K + 1);
        }
        Rational S = 0;
        unsigned long f = 1;
        for (unsigned long k = 1; k <= K; ++k) {
            f *= k;
            S += Rational(Integer(1), ipow(base, f));
        }
        S *= coeff;
        Rational tail = two_c / Rational(ipow(base, fact_next));
        if (coeff > 0) return {S, S + tail};
        return {S - tail, S};
    }
    std::string repr() const override {
        if (coeff == 1) return "liouville(" + base.str() + ")";
        return "liouville(" + to_string(coeff) + ", " + base.str() + ")";
    }
    std::optional<LiouvilleData> liouville() const override { return LiouvilleData{base, coeff}; }
    std::optional<LinearForm> compute_form() const override {
        LinearForm f;
        f.series.emplace(base, coeff);
        return f;
    }
};

struct LabelNode : Node {
    std::string name;
    NodePtr child;
    LabelNode(std::string n, NodePtr c) : name(std::move(n)), child(std::move(c)) {}
    Interval compute(long bits) const override { return child->eval(bits); }
    std::string repr() const override { return name; }
    const Rational* exact() const override { return child->exact(); }
    std::optional<LiouvilleData> liouville() const override { return child->liouville(); }
    std::optional<PowerForm> power() const override { return child->power(); }
    std::optional<LinearForm> compute_form() const override { return child->form(); }
};

struct AddNode : Node {
    NodePtr a, b;
    AddNode(NodePtr x, NodePtr y) : a(std::move(x)), b(std::move(y)) {}
    Interval compute(long bits) const override {
        Interval A = a->eval(bits + 2), B = b->eval(bits + 2);
        return outward({A.lo + B.lo, A.hi + B.hi}, bits + 4);
    }
    std::string repr() const override { return "(" + a->repr() + " + " + b->repr() + ")"; }
    std::optional<LinearForm> compute_form() const override {
        const auto &x = a->form(), &y = b->form();
        if (!x || !y) return std::nullopt;
        return form_add(*x, *y);
    }
};

struct NegNode : Node {
    NodePtr a;
    explicit NegNode(NodePtr x) : a(std::move(x)) {}
    Interval compute(long bits) const override {
        Interval A = a->eval(bits);
        return {-A.hi, -A.lo};
    }
    std::string repr() const override { return "-" + a->repr(); }
    std::optional<LinearForm> compute_form() const override {
        const auto& x = a->form();
        if (!x) return std::nullopt;
        return form_scale(*x, Rational(-1));
    }
};

struct MulNode : Node {
    NodePtr a, b;
    MulNode(NodePtr x, NodePtr y) : a(std::move(x)), b(std::move(y)) {}
    Interval compute(long bits) const override {
        Interval ca = a->eval(4), cb = b->eval(4);
        Interval A = a->eval(bits + 2 + mag_bits(cb));
        Interval B = b->eval(bits + 2 + mag_bits(ca));
        Rational p1 = A.lo * B.lo, p2 = A.lo * B.hi, p3 = A.hi * B.lo, p4 = A.hi * B.hi;
        Rational lo = std::min({p1, p2, p3, p4}), hi = std::max({p1, p2, p3, p4});
        return outward({lo, hi}, bits + 4);
    }
    std::string repr() const override { return a->repr() + "*" + b->repr(); }
    std::optional<LinearForm> compute_form() const override {
        const auto &x = a->form(), &y = b->form();
        if (!x || !y) return std::nullopt;
        return form_mul(*x, *y);
    }
};

struct InvNode : Node {
    NodePtr a;
    explicit InvNode(NodePtr x) : a(std::move(x)) {}
    Interval compute(long bits) const override {
        long k = 8;
        Interval A = a->eval(k);
        long limit = 4 * std::max(precision_cap(), bits) + 1024;
        while (A.lo <= 0 && A.hi >= 0) {
            k = 2 * k + 8;
            if (k > limit) throw PrecisionExhausted("division by a value indistinguishable from zero: " + a->repr());
            A = a->eval(k);
        }
        Rational l = std::min(abs(A.lo), abs(A.hi));
        long extra = 2 * std::max(0L, -ilog2_abs(l) + 2) + 4;
        A = a->eval(bits + extra);
        return outward({Rational(1) / A.hi, Rational(1) / A.lo}, bits + 4);
    }
    std::string repr() const override { return "1/" + a->repr(); }
    std::optional<LinearForm> compute_form() const override {
        const auto& x = a->form();
        if (!x) return std::nullopt;
        return form_inv(*x);
    }
    std::optional<PowerForm> power() const override {
        auto p = a->power();
        if (!p || p->base == 0) return std::nullopt;
        return PowerForm{p->base, -p->exponent};
    }
};

// Sign of a node whose linear form is known; a nonzero form has a nonzero value, so
// refinement terminates (bounded here for safety).
std::optional<int> form_sign(const Node& n, const LinearForm& f) {
    if (f.is_zero()) return 0;
    for (long bits = 32; bits <= 8192; bits *= 2) {
        Interval I = n.eval(bits);
        if (I.lo > 0) return 1;
        if (I.hi < 0) return -1;
    }
    return std::nullopt;
}

struct AbsNode : Node {
    NodePtr a;
    explicit AbsNode(NodePtr x) : a(std::move(x)) {}
    Interval compute(long bits) const override {
        Interval A = a->eval(bits);
        if (A.lo >= 0) return A;
        if (A.hi <= 0) return {-A.hi, -A.lo};
        return {Rational(0), std::max(-A.lo, A.hi)};
    }
    std::string repr() const override { return "|" + a->repr() + "|"; }
    std::optional<LinearForm> compute_form() const override {
        const auto& x = a->form();
        if (!x) return std::nullopt;
        auto sg = form_sign(*a, *x);
        if (!sg) return std::nullopt;
        return *sg < 0 ? form_scale(*x, Rational(-1)) : *x;
    }
};

struct MaxNode : Node {
    NodePtr a, b;
    bool is_max;
    MaxNode(NodePtr x, NodePtr y, bool mx) : a(std::move(x)), b(std::move(y)), is_max(mx) {}
    Interval compute(long bits) const override {
        Interval A = a->eval(bits), B = b->eval(bits);
        if (is_max) return {std::max(A.lo, B.lo), std::max(A.hi, B.hi)};
        return {std::min(A.lo, B.lo), std::min(A.hi, B.hi)};
    }
    std::string repr() const override {
        return std::string(is_max ? "max(" : "min(") + a->repr() + ", " + b->repr() + ")";
    }
    std::optional<LinearForm> compute_form() const override {
        const auto &x = a->form(), &y = b->form();
        if (!x || !y) return std::nullopt;
        LinearForm d = form_add(*x, form_scale(*y, Rational(-1)));
        std::optional<int> sg;
        if (d.is_zero()) {
            sg = 0;
        } else {
            for (long bits = 32; bits <= 8192 && !sg; bits *= 2) {
                Interval A = a->eval(bits), B = b->eval(bits);
                if (A.lo > B.hi) sg = 1;
                else if (A.hi < B.lo) sg = -1;
            }
        }
        if (!sg) return std::nullopt;
        return (*sg >= 0) == is_max ? *x : *y;
    }
};

// base >= 0, exponent > 0 and not an integer-valued fold.
struct PowNode : Node {
    NodePtr a;
    Rational e;
    PowNode(NodePtr x, Rational ex) : a(std::move(x)), e(std::move(ex)) {}
    Interval compute(long bits) const override {
        Interval c = a->eval(8);
        Rational l = std::max(c.lo, Rational(0));
        long child;
        double ed = to_double(e);
        if (e >= 1) {
            child = bits + 4 + static_cast<long>(std::ceil(std::log2(ed) + (ed - 1) * mag_bits(c)));
        } else if (l > 0) {
            child = bits + 4 + static_cast<long>(std::ceil((1 - ed) * std::max(0L, -ilog2_abs(l) + 2)));
        } else {
            child = static_cast<long>(std::ceil(bits / ed)) + 4;
        }
        Interval A = a->eval(child);
        Rational lo = std::max(A.lo, Rational(0)), hi = std::max(A.hi, Rational(0));
        unsigned long p = numer(e).convert_to<unsigned long>();
        unsigned long q = denom(e).convert_to<unsigned long>();
        Rational lop = rpow(lo, static_cast<long>(p)), hip = rpow(hi, static_cast<long>(p));
        if (q == 1) return outward({lop, hip}, bits + 4);
        long k = bits + 4;
        Rational scale = pow2(k);
        Rational scale_q = pow2(k * static_cast<long>(q));
        Integer L = iroot_floor(floor_int(lop * scale_q), q);
        Integer U = iroot_floor(ceil_int(hip * scale_q), q) + 1;
        return {Rational(L) / scale, Rational(U) / scale};
    }
    std::string repr() const override { return "(" + a->repr() + ")^(" + to_string(e) + ")"; }
    std::optional<LinearForm> compute_form() const override {
        if (const Rational* b = a->exact()) {
            // b^(k/2) = sqrt(b^k)
            if (denom(e) != 2 || abs(numer(e)) > 64) return std::nullopt;
            return sqrt_form(rpow(*b, numer(e).convert_to<long>()));
        }
        if (denom(e) != 1 || numer(e) > 64) return std::nullopt;
        const auto& x = a->form();
        if (!x) return std::nullopt;
        LinearForm r = *x;
        for (long k = 1; k < numer(e).convert_to<long>(); ++k) {
            auto next = form_mul(r, *x);
            if (!next) return std::nullopt;
            r = std::move(*next);
        }
        return r;
    }
    std::optional<PowerForm> power() const override {
        const Rational* b = a->exact();
        if (!b) {
            auto inner = a->power();
            if (!inner) return std::nullopt;
            return PowerForm{inner->base, inner->exponent * e};
        }
        return PowerForm{*b, e};
    }
};

NodePtr make_exact(Rational v) { return std::make_shared<ExactNode>(std::move(v)); }

}  // namespace detail

using detail::NodePtr;

namespace {

const NodePtr& zero_node() {
    static const NodePtr z = detail::make_exact(Rational(0));
    return z;
}

bool exact_root(const Rational& v, const Rational& e, Rational* out) {
    // v >= 0, e > 0: is v^e rational?
    unsigned long p = numer(e).convert_to<unsigned long>();
    unsigned long q = denom(e).convert_to<unsigned long>();
    if (p > 4096) return false;
    Integer rn, rd;
    if (!is_perfect_power(numer(v), q, &rn) || !is_perfect_power(denom(v), q, &rd)) return false;
    *out = rpow(Rational(rn, rd), static_cast<long>(p));
    return true;
}

// Exact comparison of b1^e1 and b2^e2 when the integer powers stay small.
std::optional<int> compare_power_forms(const PowerForm& x, const PowerForm& y) {
    if (x.base == 0 || y.base == 0) {
        int sx = x.base == 0 ? 0 : 1, sy = y.base == 0 ? 0 : 1;
        return sx < sy ? -1 : (sx > sy ? 1 : 0);
    }
    Integer L = lcm(denom(x.exponent), denom(y.exponent));
    Rational n1 = x.exponent * Rational(L), n2 = y.exponent * Rational(L);
    Integer i1 = numer(n1), i2 = numer(n2);
    const Integer lim(1 << 14);
    if (abs(i1) > lim || abs(i2) > lim) return std::nullopt;
    long bits1 = std::abs(ilog2_abs(x.base)) + static_cast<long>(mpz_sizeinbase(denom(x.base).backend().data(), 2));
    long bits2 = std::abs(ilog2_abs(y.base)) + static_cast<long>(mpz_sizeinbase(denom(y.base).backend().data(), 2));
    if (bits1 * abs(i1).convert_to<long>() > (1L << 22) || bits2 * abs(i2).convert_to<long>() > (1L << 22))
        return std::nullopt;
    Rational a = rpow(x.base, i1.convert_to<long>());
    Rational b = rpow(y.base, i2.convert_to<long>());
    return a < b ? -1 : (a > b ? 1 : 0);
}

// b1^e1 * b2^e2 as a single rational power when the integer powers stay small.
std::optional<PowerForm> combine_powers(const PowerForm& x, const PowerForm& y) {
    Integer L = lcm(denom(x.exponent), denom(y.exponent));
    Rational n1 = x.exponent * Rational(L), n2 = y.exponent * Rational(L);
    const Integer lim(64);
    if (abs(numer(n1)) > lim || abs(numer(n2)) > lim || L > lim) return std::nullopt;
    if (ilog2_abs(x.base) > 4096 || ilog2_abs(y.base) > 4096) return std::nullopt;
    Rational base = rpow(x.base, numer(n1).convert_to<long>()) * rpow(y.base, numer(n2).convert_to<long>());
    return PowerForm{base, Rational(Integer(1), L)};
}

std::optional<int> try_decide(const Interval& A, const Interval& B) {
    if (A.hi < B.lo) return -1;
    if (A.lo > B.hi) return 1;
    if (A.lo == A.hi && B.lo == B.hi && A.lo == B.lo) return 0;
    return std::nullopt;
}

}  // namespace

CertReal::CertReal() : node_(zero_node()) {}
CertReal::CertReal(const Rational& v) : node_(v == 0 ? zero_node() : detail::make_exact(v)) {}
CertReal::CertReal(const Integer& v) : CertReal(Rational(v)) {}
CertReal::CertReal(long long v) : CertReal(Rational(v)) {}

CertReal CertReal::sqrt(const Rational& r) {
    if (r < 0) throw InvalidArgument("sqrt of a negative rational");
    Rational out;
    if (exact_root(r, Rational(1, 2), &out)) return CertReal(out);
    return CertReal(std::make_shared<detail::SqrtNode>(r));
}

CertReal CertReal::phi() {
    static const CertReal v = ((CertReal(1) + CertReal::sqrt(Rational(5))) / CertReal(2)).with_label("phi");
    return v;
}

CertReal CertReal::liouville(const Integer& base, const Rational& coeff) {
    if (base < 2) throw InvalidArgument("liouville base must be >= 2");
    if (coeff == 0) return CertReal();
    return CertReal(std::make_shared<detail::LiouvilleNode>(base, coeff));
}

CertReal CertReal::with_label(std::string name) const {
    if (is_exact()) return *this;
    return CertReal(std::make_shared<detail::LabelNode>(std::move(name), node_));
}

bool CertReal::is_exact() const { return node_->exact() != nullptr; }

const Rational& CertReal::exact_value() const {
    const Rational* v = node_->exact();
    if (!v) throw InvalidArgument("not an exact rational: " + repr());
    return *v;
}

Interval CertReal::enclose(long bits) const {
    if (const Rational* v = node_->exact()) return {*v, *v};
    Rational target = pow2(-bits);
    long internal = bits;
    long limit = 64 * std::max(bits, 64L) + 100000;
    for (;;) {
        Interval I = node_->eval(internal);
        if (I.width() <= target) return I;
        internal += std::max(16L, internal / 2);
        if (internal > limit) throw PrecisionExhausted("enclosure of " + repr() + " did not converge");
    }
}

double CertReal::approx() const {
    if (const Rational* v = node_->exact()) return to_double(*v);
    Interval I = enclose(64);
    return to_double((I.lo + I.hi) / 2);
}

std::string CertReal::repr() const { return node_->repr(); }
std::optional<LiouvilleData> CertReal::liouville_data() const { return node_->liouville(); }
std::optional<PowerForm> CertReal::power_form() const { return node_->power(); }
std::optional<LinearForm> CertReal::linear_form() const { return node_->form(); }

CertReal operator+(const CertReal& a, const CertReal& b) {
    const Rational *x = a.node_->exact(), *y = b.node_->exact();
    if (x && y) return CertReal(*x + *y);
    if (x && *x == 0) return b;
    if (y && *y == 0) return a;
    return CertReal(std::make_shared<detail::AddNode>(a.node_, b.node_));
}

CertReal operator-(const CertReal& a) {
    if (const Rational* x = a.node_->exact()) return CertReal(Rational(-*x));
    return CertReal(std::make_shared<detail::NegNode>(a.node_));
}

CertReal operator-(const CertReal& a, const CertReal& b) { return a + (-b); }

CertReal operator*(const CertReal& a, const CertReal& b) {
    const Rational *x = a.node_->exact(), *y = b.node_->exact();
    if (x && y) return CertReal(*x * *y);
    if ((x && *x == 0) || (y && *y == 0)) return CertReal();
    if (x && *x == 1) return b;
    if (y && *y == 1) return a;
    if (x && *x < 0) return -(CertReal(Rational(-*x)) * b);
    if (y && *y < 0) return -(a * CertReal(Rational(-*y)));
    auto pa = a.node_->power(), pb = b.node_->power();
    if (pa && pb && pa->base > 0 && pb->base > 0) {
        if (auto f = combine_powers(*pa, *pb)) return pow(CertReal(f->base), f->exponent);
    }
    return CertReal(std::make_shared<detail::MulNode>(a.node_, b.node_));
}

CertReal operator/(const CertReal& a, const CertReal& b) {
    const Rational* y = b.node_->exact();
    if (y) {
        if (*y == 0) throw InvalidArgument("division by zero");
        return a * CertReal(Rational(1) / *y);
    }
    auto p = b.node_->power();
    if (p && p->base > 0) return a * pow(CertReal(p->base), Rational(-p->exponent));
    return a * CertReal(std::make_shared<detail::InvNode>(b.node_));
}

CertReal abs(const CertReal& a) {
    if (const Rational* x = a.node_->exact()) return CertReal(Rational(abs(*x)));
    if (a.node_->power()) return a;
    if (auto l = a.node_->liouville(); l && l->coeff > 0) return a;
    return CertReal(std::make_shared<detail::AbsNode>(a.node_));
}

CertReal pow(const CertReal& base, const Rational& e) {
    if (e == 0) return CertReal(1);
    if (e == 1) return base;
    if (const Rational* x = base.node_->exact()) {
        if (*x < 0) throw InvalidArgument("pow of a negative base");
        if (*x == 0) {
            if (e < 0) throw InvalidArgument("zero to a negative power");
            return CertReal();
        }
        Rational out;
        if (exact_root(*x, abs(e), &out)) return CertReal(e > 0 ? out : Rational(1) / out);
        if (e < 0) {
            return CertReal(std::make_shared<detail::InvNode>(pow(base, Rational(-e)).node_));
        }
        return CertReal(std::make_shared<detail::PowNode>(base.node_, e));
    }
    if (auto p = base.node_->power(); p && p->base > 0) return pow(CertReal(p->base), p->exponent * e);
    if (e < 0) return CertReal(std::make_shared<detail::InvNode>(pow(base, Rational(-e)).node_));
    return CertReal(std::make_shared<detail::PowNode>(base.node_, e));
}

CertReal max(const CertReal& a, const CertReal& b) {
    const Rational *x = a.node_->exact(), *y = b.node_->exact();
    if (x && y) return CertReal(std::max(*x, *y));
    auto pa = a.node_->power(), pb = b.node_->power();
    if (pa && pb) {
        if (auto c = compare_power_forms(*pa, *pb)) return *c >= 0 ? a : b;
    }
    return CertReal(std::make_shared<detail::MaxNode>(a.node_, b.node_, true));
}

CertReal min(const CertReal& a, const CertReal& b) {
    const Rational *x = a.node_->exact(), *y = b.node_->exact();
    if (x && y) return CertReal(std::min(*x, *y));
    auto pa = a.node_->power(), pb = b.node_->power();
    if (pa && pb) {
        if (auto c = compare_power_forms(*pa, *pb)) return *c <= 0 ? a : b;
    }
    return CertReal(std::make_shared<detail::MaxNode>(a.node_, b.node_, false));
}

void set_precision_cap(long bits) {
    if (bits < 16) throw InvalidArgument("precision cap must be at least 16 bits");
    g_precision_cap.store(bits);
}

long precision_cap() { return g_precision_cap.load(); }

int compare(const CertReal& a, const CertReal& b) { return compare(a, b, precision_cap()); }

int compare(const CertReal& a, const CertReal& b, long cap_bits) {
    if (a.is_exact() && b.is_exact()) {
        const Rational &x = a.exact_value(), &y = b.exact_value();
        return x < y ? -1 : (x > y ? 1 : 0);
    }
    auto pa = a.power_form(), pb = b.power_form();
    if (pa && pb) {
        if (auto c = compare_power_forms(*pa, *pb)) return *c;
    }
    bool form_checked = false;
    for (long bits = std::min(32L, cap_bits);; bits = std::min(2 * bits, cap_bits)) {
        if (auto c = try_decide(a.enclose(bits), b.enclose(bits))) return *c;
        if (!form_checked && bits >= std::min(64L, cap_bits)) {
            form_checked = true;
            auto fa = a.linear_form(), fb = b.linear_form();
            if (fa && fb && form_add(*fa, form_scale(*fb, Rational(-1))).is_zero()) return 0;
        }
        if (bits >= cap_bits) break;
    }
    throw PrecisionExhausted(a.repr() + " vs " + b.repr());
}

int sign(const CertReal& a) { return compare(a, CertReal()); }

Ordering try_compare(const CertReal& a, const CertReal& b) {
    try {
        int c = compare(a, b);
        return c < 0 ? Ordering::less : (c > 0 ? Ordering::greater : Ordering::equal);
    } catch (const PrecisionExhausted&) {
        return Ordering::undecided;
    }
}

Integer floor_int(const CertReal& x) {
    if (x.is_exact()) return floor_int(x.exact_value());
    long cap = precision_cap();
    for (long bits = 32;; bits = std::min(2 * bits, cap)) {
        Interval I = x.enclose(bits);
        Integer a = floor_int(I.lo), b = floor_int(I.hi);
        if (a == b) return a;
        if (bits >= 64) {
            if (auto f = x.linear_form()) {
                if (auto v = f->as_rational()) return floor_int(*v);
            }
        }
        if (bits >= cap) break;
    }
    throw PrecisionExhausted("floor of " + x.repr());
}

bool LogInterval::neg_inf() const { return std::isinf(hi) && hi < 0; }

namespace {

double mpfr_log_q(const Rational& x, mpfr_rnd_t rnd) {
    mpfr_t t;
    mpfr_init2(t, 160);
    mpfr_set_q(t, x.backend().data(), rnd);
    mpfr_log(t, t, rnd);
    double d = mpfr_get_d(t, rnd);
    mpfr_clear(t);
    return d;
}

}  // namespace

LogInterval log_enclosure(const Rational& x) {
    if (x < 0) throw InvalidArgument("log of a negative number");
    if (x == 0) {
        double n = -std::numeric_limits<double>::infinity();
        return {n, n};
    }
    return {mpfr_log_q(x, MPFR_RNDD), mpfr_log_q(x, MPFR_RNDU)};
}

LogInterval log_enclosure(const CertReal& x) {
    if (x.is_exact()) return log_enclosure(x.exact_value());
    long cap = precision_cap();
    for (long bits = 64;; bits = std::min(2 * bits, cap)) {
        Interval I = x.enclose(bits);
        if (I.hi < 0) throw InvalidArgument("log of a negative number");
        if (I.lo > 0 && (I.hi - I.lo) * (1L << 30) <= I.lo)
            return {mpfr_log_q(I.lo, MPFR_RNDD), mpfr_log_q(I.hi, MPFR_RNDU)};
        if (bits >= cap) {
            if (I.lo > 0) return {mpfr_log_q(I.lo, MPFR_RNDD), mpfr_log_q(I.hi, MPFR_RNDU)};
            break;
        }
    }
    throw PrecisionExhausted("log of " + x.repr() + " (value indistinguishable from zero)");
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    CertReal parse() {
        CertReal v = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected trailing input");
        return v;
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& why) const {
        throw InvalidArgument("cannot parse '" + std::string(s_) + "': " + why);
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    CertReal expr() {
        CertReal v = term();
        for (;;) {
            if (eat('+')) v = v + term();
            else if (eat('-')) v = v - term();
            else return v;
        }
    }
    CertReal term() {
        CertReal v = unary();
        for (;;) {
            if (eat('*')) v = v * unary();
            else if (eat('/')) v = v / unary();
            else return v;
        }
    }
    CertReal unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    CertReal power() {
        CertReal b = atom();
        if (eat('^')) {
            CertReal e = unary();
            if (!e.is_exact()) fail("exponent must be rational");
            return pow(b, e.exact_value());
        }
        return b;
    }
    CertReal atom() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end of input");
        char c = s_[i_];
        if (c == '(') {
            ++i_;
            CertReal v = expr();
            expect(')');
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return call();
        fail(std::string("unexpected character '") + c + "'");
    }
    CertReal number() {
        std::size_t start = i_;
        while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
        if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
            std::size_t j = i_ + 1;
            if (j < s_.size() && (s_[j] == '-' || s_[j] == '+')) ++j;
            if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
                i_ = j;
                while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            }
        }
        return CertReal(parse_rational(s_.substr(start, i_ - start)));
    }
    CertReal call() {
        std::size_t start = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        std::string name(s_.substr(start, i_ - start));
        if (name == "phi") return CertReal::phi();
        std::vector<CertReal> args;
        expect('(');
        args.push_back(expr());
        while (eat(',')) args.push_back(expr());
        expect(')');
        if (name == "sqrt") {
            if (args.size() != 1) fail("sqrt takes one argument");
            if (args[0].is_exact()) return CertReal::sqrt(args[0].exact_value());
            if (sign(args[0]) < 0) fail("sqrt of a negative value");
            return pow(args[0], Rational(1, 2));
        }
        if (name == "pow") {
            if (args.size() != 2 || !args[1].is_exact()) fail("pow(x, e) needs a rational exponent");
            return pow(args[0], args[1].exact_value());
        }
        if (name == "liouville") {
            if (args.empty() || args.size() > 2) fail("liouville takes one or two arguments");
            const CertReal& b = args.back();
            if (!b.is_exact() || denom(b.exact_value()) != 1) fail("liouville base must be an integer");
            Rational coeff(1);
            if (args.size() == 2) {
                if (!args[0].is_exact()) fail("liouville coefficient must be rational");
                coeff = args[0].exact_value();
            }
            return CertReal::liouville(numer(b.exact_value()), coeff);
        }
        fail("unknown function '" + name + "'");
    }
};

}  // namespace

CertReal CertReal::parse(std::string_view text) { return Parser(text).parse(); }

}  // namespace dioph
