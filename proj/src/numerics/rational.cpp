#include "dioph/numerics/rational.hpp"

#include "dioph/numerics/errors.hpp"

#include <gmp.h>

#include <cctype>
#include <limits>

namespace dioph {

namespace {

Integer parse_integer(std::string_view t, std::string_view whole) {
    if (t.empty()) throw InvalidArgument("empty number in '" + std::string(whole) + "'");
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw InvalidArgument("bad number '" + std::string(whole) + "'");
    for (std::size_t j = i; j < t.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(t[j])))
            throw InvalidArgument("bad number '" + std::string(whole) + "'");
    Integer v(std::string(t.substr(t[0] == '+' ? 1 : 0)));
    return v;
}

Rational parse_decimal(std::string_view t, std::string_view whole) {
    long exp10 = 0;
    auto epos = t.find_first_of("eE");
    if (epos != std::string_view::npos) {
        exp10 = to_int64(parse_integer(t.substr(epos + 1), whole));
        t = t.substr(0, epos);
    }
    bool neg = !t.empty() && t[0] == '-';
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
    std::string digits;
    auto dot = t.find('.');
    if (dot != std::string_view::npos) {
        digits = std::string(t.substr(0, dot)) + std::string(t.substr(dot + 1));
        exp10 -= static_cast<long>(t.size() - dot - 1);
    } else {
        digits = std::string(t);
    }
    if (digits.empty()) throw InvalidArgument("bad number '" + std::string(whole) + "'");
    Rational v(parse_integer(digits, whole));
    Integer ten_pow = ipow(Integer(10), static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    v = exp10 < 0 ? v / Rational(ten_pow) : v * Rational(ten_pow);
    return neg ? Rational(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view t = text;
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
    auto slash = t.find('/');
    if (slash != std::string_view::npos) {
        Integer p = parse_integer(t.substr(0, slash), text);
        Integer q = parse_integer(t.substr(slash + 1), text);
        if (q == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
        return Rational(p, q);
    }
    if (t.find_first_of(".eE") != std::string_view::npos) return parse_decimal(t, text);
    return Rational(parse_integer(t, text));
}

std::string to_string(const Rational& x) {
    if (denom(x) == 1) return numer(x).str();
    return numer(x).str() + "/" + denom(x).str();
}

std::string to_string(const Integer& x) { return x.str(); }

double to_double(const Rational& x) { return mpq_get_d(x.backend().data()); }

Integer numer(const Rational& x) { return mp::numerator(x); }
Integer denom(const Rational& x) { return mp::denominator(x); }

Integer floor_int(const Rational& x) {
    Integer r;
    mpz_fdiv_q(r.backend().data(), mpq_numref(x.backend().data()), mpq_denref(x.backend().data()));
    return r;
}

Integer ceil_int(const Rational& x) {
    Integer r;
    mpz_cdiv_q(r.backend().data(), mpq_numref(x.backend().data()), mpq_denref(x.backend().data()));
    return r;
}

Integer ipow(const Integer& base, unsigned long exp) {
    Integer r;
    mpz_pow_ui(r.backend().data(), base.backend().data(), exp);
    return r;
}

Rational rpow(const Rational& base, long exp) {
    unsigned long e = static_cast<unsigned long>(exp < 0 ? -exp : exp);
    Rational r(ipow(numer(base), e), ipow(denom(base), e));
    if (exp < 0) {
        if (base == 0) throw InvalidArgument("zero to a negative power");
        r = Rational(1) / r;
    }
    return r;
}

Integer iroot_floor(const Integer& x, unsigned long n) {
    if (x < 0) throw InvalidArgument("iroot of a negative integer");
    Integer r;
    mpz_root(r.backend().data(), x.backend().data(), n);
    return r;
}

bool is_perfect_power(const Integer& x, unsigned long n, Integer* root) {
    if (x < 0) return false;
    Integer r;
    int exact = mpz_root(r.backend().data(), x.backend().data(), n);
    if (root) *root = r;
    return exact != 0;
}

Rational round_down_dyadic(const Rational& x, long bits) {
    Integer scale = ipow(Integer(2), static_cast<unsigned long>(bits));
    return Rational(floor_int(x * Rational(scale)), scale);
}

Rational round_up_dyadic(const Rational& x, long bits) {
    Integer scale = ipow(Integer(2), static_cast<unsigned long>(bits));
    return Rational(ceil_int(x * Rational(scale)), scale);
}

long ilog2_abs(const Rational& x) {
    long a = static_cast<long>(mpz_sizeinbase(mpq_numref(x.backend().data()), 2));
    long b = static_cast<long>(mpz_sizeinbase(mpq_denref(x.backend().data()), 2));
    return a - b;
}

Integer gcd(const Integer& a, const Integer& b) {
    Integer r;
    mpz_gcd(r.backend().data(), a.backend().data(), b.backend().data());
    return r;
}

Integer lcm(const Integer& a, const Integer& b) {
    Integer r;
    mpz_lcm(r.backend().data(), a.backend().data(), b.backend().data());
    return r;
}

bool fits_int64(const Integer& x) {
    return x >= Integer(std::numeric_limits<std::int64_t>::min()) &&
           x <= Integer(std::numeric_limits<std::int64_t>::max());
}

std::int64_t to_int64(const Integer& x) {
    if (!fits_int64(x)) throw InvalidArgument("integer does not fit in 64 bits: " + x.str());
    return x.convert_to<std::int64_t>();
}

}  // namespace dioph
