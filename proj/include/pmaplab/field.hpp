#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace pmaplab {

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((unsigned __int128)a * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
    __int128 t = 0, nt = 1, r = m, nr = a % m;
    while (nr != 0) {
        __int128 q = r / nr;
        __int128 tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw std::domain_error("inverse of zero");
    if (t < 0) t += m;
    return static_cast<std::uint64_t>(t);
}

} // namespace detail

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int r = 1; r < s; ++r) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) {
                comp = false;
                break;
            }
        }
        if (comp) return false;
    }
    return true;
}

// Smallest prime strictly greater than max(n^6, 10 n^5, 2n+2).
inline std::uint64_t choose_prime(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("choose_prime: n must be positive");
    unsigned __int128 N = n;
    unsigned __int128 a = N * N * N * N * N * N, b = 10 * N * N * N * N * N, c = 2 * N + 2;
    unsigned __int128 bound = std::max({a, b, c});
    if (bound > (unsigned __int128)(1ULL << 62)) throw InvalidField("n too large for a 62-bit prime");
    auto x = static_cast<std::uint64_t>(bound) + 1;
    while (!is_prime(x)) ++x;
    return x;
}

// Prime field element. The modulus travels with the value so generic code
// can use ordinary operators.
struct Fp {
    std::uint64_t v = 0;
    std::uint64_t p = 0;
};

namespace detail {
inline std::uint64_t mod_of(const Fp& a, const Fp& b) { return a.p ? a.p : b.p; }
} // namespace detail

inline Fp operator+(const Fp& a, const Fp& b) {
    std::uint64_t p = detail::mod_of(a, b);
    std::uint64_t s = a.v + b.v;
    if (s >= p) s -= p;
    return {s, p};
}
inline Fp operator-(const Fp& a, const Fp& b) {
    std::uint64_t p = detail::mod_of(a, b);
    return {a.v >= b.v ? a.v - b.v : a.v + p - b.v, p};
}
inline Fp operator-(const Fp& a) { return {a.v ? a.p - a.v : 0, a.p}; }
inline Fp operator*(const Fp& a, const Fp& b) {
    std::uint64_t p = detail::mod_of(a, b);
    return {detail::mulmod(a.v, b.v, p), p};
}
inline Fp operator/(const Fp& a, const Fp& b) {
    std::uint64_t p = detail::mod_of(a, b);
    return {detail::mulmod(a.v, detail::invmod(b.v, p), p), p};
}
inline Fp& operator+=(Fp& a, const Fp& b) { return a = a + b; }
inline Fp& operator-=(Fp& a, const Fp& b) { return a = a - b; }
inline Fp& operator*=(Fp& a, const Fp& b) { return a = a * b; }
inline Fp& operator/=(Fp& a, const Fp& b) { return a = a / b; }
inline bool operator==(const Fp& a, const Fp& b) { return a.v == b.v; }
inline bool operator!=(const Fp& a, const Fp& b) { return a.v != b.v; }

struct FieldSpec {
    enum class Kind { Prime, Rational };
    Kind kind = Kind::Rational;
    std::uint64_t modulus = 0;

    static FieldSpec prime(std::uint64_t p) {
        if (p <= 2 || !is_prime(p)) throw InvalidField("modulus must be an odd prime: " + std::to_string(p));
        if (p >= (1ULL << 62)) throw InvalidField("modulus must be below 2^62");
        return {Kind::Prime, p};
    }
    static FieldSpec rational() { return {Kind::Rational, 0}; }
    bool is_prime_kind() const { return kind == Kind::Prime; }
    bool operator==(const FieldSpec&) const = default;
};

class PrimeField {
public:
    using Elem = Fp;
    static constexpr bool is_rational = false;

    explicit PrimeField(std::uint64_t p) : p_(FieldSpec::prime(p).modulus) {}

    std::uint64_t modulus() const { return p_; }
    FieldSpec spec() const { return FieldSpec{FieldSpec::Kind::Prime, p_}; }
    bool operator==(const PrimeField& o) const { return p_ == o.p_; }

    Elem zero() const { return {0, p_}; }
    Elem one() const { return {1, p_}; }
    Elem from_int(long long x) const {
        long long r = x % static_cast<long long>(p_);
        if (r < 0) r += static_cast<long long>(p_);
        return {static_cast<std::uint64_t>(r), p_};
    }
    bool is_zero(const Elem& a) const { return a.v == 0; }
    Elem inv(const Elem& a) const { return {detail::invmod(a.v, p_), p_}; }
    Elem pow(Elem a, std::uint64_t e) const { return {detail::powmod(a.v, e, p_), p_}; }

    // Tonelli-Shanks; returns the smaller of the two residues.
    std::optional<Elem> sqrt(const Elem& a) const {
        if (a.v == 0) return zero();
        if (detail::powmod(a.v, (p_ - 1) / 2, p_) != 1) return std::nullopt;
        std::uint64_t q = p_ - 1;
        int s = 0;
        while ((q & 1) == 0) {
            q >>= 1;
            ++s;
        }
        std::uint64_t z = 2;
        while (detail::powmod(z, (p_ - 1) / 2, p_) != p_ - 1) ++z;
        std::uint64_t m = s, c = detail::powmod(z, q, p_), t = detail::powmod(a.v, q, p_),
                      r = detail::powmod(a.v, (q + 1) / 2, p_);
        while (t != 1) {
            std::uint64_t i = 0, tt = t;
            while (tt != 1) {
                tt = detail::mulmod(tt, tt, p_);
                ++i;
            }
            std::uint64_t b = c;
            for (std::uint64_t k = 0; k + i + 1 < m; ++k) b = detail::mulmod(b, b, p_);
            m = i;
            c = detail::mulmod(b, b, p_);
            t = detail::mulmod(t, c, p_);
            r = detail::mulmod(r, b, p_);
        }
        return Elem{std::min(r, p_ - r), p_};
    }

    std::string to_string(const Elem& a) const { return std::to_string(a.v); }
    Elem parse(const std::string& s) const {
        auto slash = s.find('/');
        if (slash != std::string::npos) return parse(s.substr(0, slash)) / parse(s.substr(slash + 1));
        mpz_class z;
        if (s.empty() || z.set_str(s, 10) != 0) throw FormatError("bad field value '" + s + "'");
        mpz_class r = z % mpz_class(std::to_string(p_));
        if (r < 0) r += mpz_class(std::to_string(p_));
        return {std::stoull(r.get_str()), p_};
    }

    // k-th element in the canonical enumeration 0, 1, 2, ...
    Elem canonical(std::uint64_t k) const { return {k % p_, p_}; }
    bool less(const Elem& a, const Elem& b) const { return a.v < b.v; }
    bool has_more_than(std::uint64_t m) const { return p_ > m; }
    Elem random(Rng& rng) const { return {rng.below(p_), p_}; }

private:
    std::uint64_t p_;
};

class RationalField {
public:
    using Elem = mpq_class;
    static constexpr bool is_rational = true;

    RationalField() = default;
    FieldSpec spec() const { return FieldSpec::rational(); }
    bool operator==(const RationalField&) const { return true; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem from_int(long long x) const { return mpq_class(mpz_class(std::to_string(x))); }
    bool is_zero(const Elem& a) const { return sgn(a) == 0; }
    Elem inv(const Elem& a) const {
        if (sgn(a) == 0) throw std::domain_error("inverse of zero");
        return 1 / a;
    }
    Elem pow(Elem a, std::uint64_t e) const {
        Elem r = 1;
        while (e) {
            if (e & 1) r *= a;
            a *= a;
            e >>= 1;
        }
        return r;
    }

    // Nonnegative root when numerator and denominator are perfect squares.
    std::optional<Elem> sqrt(const Elem& a) const {
        if (sgn(a) < 0) return std::nullopt;
        mpz_class n = a.get_num(), d = a.get_den();
        if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
        mpq_class r(::sqrt(n), ::sqrt(d));
        r.canonicalize();
        return r;
    }

    std::string to_string(const Elem& a) const { return a.get_str(); }
    Elem parse(const std::string& s) const {
        mpq_class q;
        if (s.empty() || q.set_str(s, 10) != 0) throw FormatError("bad rational '" + s + "'");
        if (sgn(q.get_den()) == 0) throw FormatError("zero denominator in '" + s + "'");
        q.canonicalize();
        return q;
    }

    Elem canonical(std::uint64_t k) const { return mpq_class(mpz_class(std::to_string(k))); }
    bool less(const Elem& a, const Elem& b) const { return a < b; }
    bool has_more_than(std::uint64_t) const { return true; }
    Elem random(Rng& rng) const { return from_int(rng.range(-1000000, 1000000)); }
};

// Roots of a z^2 - b z + c, sorted in canonical order, duplicates merged.
template <class F>
std::vector<typename F::Elem> solve_quadratic(const F& f, const typename F::Elem& a, const typename F::Elem& b,
                                              const typename F::Elem& c) {
    using E = typename F::Elem;
    std::vector<E> roots;
    if (f.is_zero(a)) {
        if (f.is_zero(b)) {
            if (f.is_zero(c)) throw DegenerateEquation("every z is a root");
            return roots;
        }
        roots.push_back(c / b);
        return roots;
    }
    E disc = b * b - f.from_int(4) * a * c;
    auto r = f.sqrt(disc);
    if (!r) return roots;
    E two_a = f.from_int(2) * a;
    roots.push_back((b - *r) / two_a);
    roots.push_back((b + *r) / two_a);
    std::sort(roots.begin(), roots.end(), [&](const E& x, const E& y) { return f.less(x, y); });
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

// Runs fn with the concrete field named by spec.
template <class Fn>
decltype(auto) with_field(const FieldSpec& spec, Fn&& fn) {
    if (spec.is_prime_kind()) return fn(PrimeField(spec.modulus));
    return fn(RationalField());
}

} // namespace pmaplab
