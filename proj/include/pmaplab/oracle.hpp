#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "matrix.hpp"

namespace pmaplab {

inline std::uint64_t field_key(const PrimeField& f) { return f.modulus(); }
inline std::uint64_t field_key(const RationalField&) { return 0; }

// Black-box n-variate polynomial with a degree bound and a query counter.
template <class F>
struct PolyBox {
    using Elem = typename F::Elem;
    using Fn = std::function<Elem(const std::vector<Elem>&)>;

    F field;
    int arity = 0;
    int degree = 0;
    Fn fn;
    std::shared_ptr<std::atomic<long long>> counter = std::make_shared<std::atomic<long long>>(0);

    PolyBox(const F& f, int n, int d, Fn g) : field(f), arity(n), degree(d), fn(std::move(g)) {}

    Elem operator()(const std::vector<Elem>& point) const {
        counter->fetch_add(1, std::memory_order_relaxed);
        return fn(point);
    }
    long long queries() const { return counter->load(); }
    void reset_queries() const { counter->store(0); }
};

namespace detail {

template <class F>
struct WeightCache {
    std::mutex mu;
    std::map<std::pair<std::uint64_t, int>, std::vector<typename F::Elem>> constant, leading;
    static WeightCache& get() {
        static WeightCache c;
        return c;
    }
};

} // namespace detail

// Nodes 1..d+1. Weights w with p(0) = sum w_m p(m) for deg p <= d.
template <class F>
std::vector<typename F::Elem> constant_term_weights(const F& f, int d) {
    auto& c = detail::WeightCache<F>::get();
    std::lock_guard<std::mutex> lock(c.mu);
    auto key = std::make_pair(field_key(f), d);
    if (auto it = c.constant.find(key); it != c.constant.end()) return it->second;
    std::vector<typename F::Elem> w;
    for (int m = 1; m <= d + 1; ++m) {
        auto num = f.one(), den = f.one();
        for (int l = 1; l <= d + 1; ++l) {
            if (l == m) continue;
            num *= f.canonical(l);
            den *= f.canonical(l) - f.canonical(m);
        }
        w.push_back(num / den);
    }
    c.constant[key] = w;
    return w;
}

// Nodes 1..k+1. Weights w with [z^k] p = sum w_m p(m) for deg p <= k.
template <class F>
std::vector<typename F::Elem> leading_coeff_weights(const F& f, int k) {
    auto& c = detail::WeightCache<F>::get();
    std::lock_guard<std::mutex> lock(c.mu);
    auto key = std::make_pair(field_key(f), k);
    if (auto it = c.leading.find(key); it != c.leading.end()) return it->second;
    std::vector<typename F::Elem> w;
    for (int m = 1; m <= k + 1; ++m) {
        auto den = f.one();
        for (int l = 1; l <= k + 1; ++l)
            if (l != m) den *= f.canonical(m) - f.canonical(l);
        w.push_back(f.one() / den);
    }
    c.leading[key] = w;
    return w;
}

// Coefficients c_0..c_d of the polynomial through (x_m, y_m), m = 0..d.
template <class F>
std::vector<typename F::Elem> interpolate(const F& f, const std::vector<typename F::Elem>& xs,
                                          const std::vector<typename F::Elem>& ys) {
    using E = typename F::Elem;
    const std::size_t n = xs.size();
    std::vector<E> coef(n, f.zero());
    for (std::size_t m = 0; m < n; ++m) {
        // basis numerator prod_{l != m} (z - x_l), built incrementally
        std::vector<E> basis{f.one()};
        E den = f.one();
        for (std::size_t l = 0; l < n; ++l) {
            if (l == m) continue;
            std::vector<E> next(basis.size() + 1, f.zero());
            for (std::size_t i = 0; i < basis.size(); ++i) {
                next[i + 1] += basis[i];
                next[i] -= basis[i] * xs[l];
            }
            basis = std::move(next);
            den *= xs[m] - xs[l];
        }
        E scale = ys[m] / den;
        for (std::size_t i = 0; i < n; ++i) coef[i] += basis[i] * scale;
    }
    return coef;
}

namespace detail {

// Evaluates det(A + diag(y)). Points close to a recently seen point reuse a
// factored base M0 = A + diag(y0) through the matrix determinant lemma:
// det(M0 + E diag(delta) E^T) = det(M0) det(I + diag(delta) M0^{-1}[S,S]).
template <class F>
class MatrixBoxEvaluator {
public:
    using E = typename F::Elem;
    static constexpr int kMaxDiff = 8;

    explicit MatrixBoxEvaluator(Matrix<F> a) : a_(std::move(a)) {}

    E operator()(const std::vector<E>& y) {
        std::lock_guard<std::mutex> lock(mu_);
        std::vector<int> S;
        for (auto& b : bases_)
            if (near(b.y, y, S)) return via_base(b, y, S);
        for (auto& r : recent_)
            if (near(r, y, S)) {
                auto m = add_diag(a_, r);
                auto inv = inverse(m);
                if (!inv) break;
                if (bases_.size() >= 4) bases_.erase(bases_.begin());
                bases_.push_back({r, *inv, det(m)});
                return via_base(bases_.back(), y, S);
            }
        if (recent_.size() >= 4) recent_.erase(recent_.begin());
        recent_.push_back(y);
        return det(add_diag(a_, y));
    }

private:
    struct Base {
        std::vector<E> y;
        Matrix<F> inv;
        E det;
    };

    bool near(const std::vector<E>& y0, const std::vector<E>& y, std::vector<int>& S) const {
        S.clear();
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] != y0[i]) {
                S.push_back(static_cast<int>(i));
                if (static_cast<int>(S.size()) > kMaxDiff) return false;
            }
        return true;
    }

    E via_base(const Base& b, const std::vector<E>& y, const std::vector<int>& S) const {
        const int k = static_cast<int>(S.size());
        std::vector<E> m;
        m.reserve(static_cast<std::size_t>(k) * k);
        for (int r = 0; r < k; ++r) {
            E delta = y[S[r]] - b.y[S[r]];
            for (int c = 0; c < k; ++c) {
                E v = delta * b.inv(S[r], S[c]);
                if (r == c) v += a_.field().one();
                m.push_back(v);
            }
        }
        E d = det_raw(a_.field(), std::move(m), k);
        return b.det * d;
    }

    Matrix<F> a_;
    std::mutex mu_;
    std::vector<Base> bases_;
    std::vector<std::vector<E>> recent_;
};

} // namespace detail

template <class F>
PolyBox<F> box_from_matrix(const Matrix<F>& a) {
    auto ev = std::make_shared<detail::MatrixBoxEvaluator<F>>(a);
    return PolyBox<F>(a.field(), a.n(), a.n(), [ev](const std::vector<typename F::Elem>& y) -> typename F::Elem {
        return (*ev)(y);
    });
}

// Value at `point`, where coordinates flagged in `inverted` may only be
// handed to the box when nonzero. Zeroed ones are replaced by a common
// scalar t and the constant term in t is interpolated from d+1 queries.
template <class F>
typename F::Elem eval_with_inversions(const PolyBox<F>& box, const std::vector<typename F::Elem>& point,
                                      const std::vector<bool>& inverted) {
    const F& f = box.field;
    std::vector<int> zeros;
    for (int i = 0; i < box.arity; ++i)
        if (inverted[i] && f.is_zero(point[i])) zeros.push_back(i);
    if (zeros.empty()) return box(point);
    const int d = box.degree;
    if (!f.has_more_than(static_cast<std::uint64_t>(d) + 1)) throw FieldTooSmall("need more than d+1 elements");
    auto w = constant_term_weights(f, d);
    auto q = point;
    auto acc = f.zero();
    for (int m = 0; m <= d; ++m) {
        for (int i : zeros) q[i] = f.canonical(m + 1);
        acc += w[m] * box(q);
    }
    return acc;
}

// det(A[T] + Y[T]) at yT (ordered like T): the coefficient of z^{n-|T|}
// with z on every coordinate outside T; n-|T|+1 queries.
template <class F>
typename F::Elem restricted_eval(const PolyBox<F>& box, const std::vector<int>& T,
                                 const std::vector<typename F::Elem>& yT) {
    const F& f = box.field;
    const int n = box.arity;
    const int k = n - static_cast<int>(T.size());
    std::vector<typename F::Elem> pt(n, f.zero());
    std::vector<bool> inT(n, false);
    for (std::size_t i = 0; i < T.size(); ++i) {
        pt[T[i]] = yT[i];
        inT[T[i]] = true;
    }
    if (k == 0) return box(pt);
    if (!f.has_more_than(static_cast<std::uint64_t>(k) + 1)) throw FieldTooSmall("need more than n-|T|+1 elements");
    auto w = leading_coeff_weights(f, k);
    auto acc = f.zero();
    for (int m = 0; m <= k; ++m) {
        for (int i = 0; i < n; ++i)
            if (!inT[i]) pt[i] = f.canonical(m + 1);
        acc += w[m] * box(pt);
    }
    return acc;
}

// det(A[T]) from the box for det(A+Y); T holds coordinate positions.
template <class F>
typename F::Elem pm_query(const PolyBox<F>& box, const std::vector<int>& T) {
    if (T.empty()) throw std::invalid_argument("pm_query: T must be nonempty");
    return restricted_eval(box, T, std::vector<typename F::Elem>(T.size(), box.field.zero()));
}

template <class F>
PolyBox<F> restrict_box(const PolyBox<F>& box, const std::vector<int>& T) {
    int k = static_cast<int>(T.size());
    return PolyBox<F>(box.field, k, k, [box, T](const std::vector<typename F::Elem>& y) -> typename F::Elem { return restricted_eval(box, T, y); });
}

// Box for det((A+D)^{-1} + Y) from the box for det(A+Y):
// det(A+D)^{-1} * prod y_i * det(A + D + Y^{-1}).
template <class F>
PolyBox<F> shifted_inverse_box(const PolyBox<F>& box, const std::vector<typename F::Elem>& D) {
    const F& f = box.field;
    auto det0 = box(D);
    if (f.is_zero(det0)) throw SingularShift();
    auto inv0 = f.inv(det0);
    const int n = box.arity;
    PolyBox<F> raw(f, n, n, [box, D, inv0, n](const std::vector<typename F::Elem>& y) -> typename F::Elem {
        const F& f = box.field;
        std::vector<typename F::Elem> q(n);
        auto prod = inv0;
        for (int i = 0; i < n; ++i) {
            q[i] = D[i] + f.inv(y[i]);
            prod *= y[i];
        }
        return prod * box(q);
    });
    return PolyBox<F>(f, n, n, [raw, n](const std::vector<typename F::Elem>& y) -> typename F::Elem {
        return eval_with_inversions(raw, y, std::vector<bool>(n, true));
    });
}

// Principal-minor oracle over an index set of labels.
template <class F>
struct PMOracle {
    using Elem = typename F::Elem;
    using Fn = std::function<Elem(const IndexSet&)>;

    F field;
    IndexSet I;
    Fn fn;
    std::shared_ptr<std::atomic<long long>> counter = std::make_shared<std::atomic<long long>>(0);

    PMOracle(const F& f, IndexSet idx, Fn g) : field(f), I(std::move(idx)), fn(std::move(g)) {}

    Elem operator()(const IndexSet& S) const {
        counter->fetch_add(1, std::memory_order_relaxed);
        return fn(S);
    }
    long long queries() const { return counter->load(); }
};

template <class F>
PMOracle<F> pm_from_matrix(const Matrix<F>& a) {
    return PMOracle<F>(a.field(), a.labels(), [a](const IndexSet& S) -> typename F::Elem { return minor(a, S); });
}

// Minor oracle for the matrix behind `box`; labels are coordinate positions.
template <class F>
PMOracle<F> pm_from_box(const PolyBox<F>& box) {
    return PMOracle<F>(box.field, iota_set(box.arity), [box](const IndexSet& S) -> typename F::Elem { return pm_query(box, S); });
}

// Minors of C = (A+D)^{-1} through Jacobi's identity
// det(C[S]) = det((A+D)[S']) / det(A+D), S' the complement of S. The
// complementary minor is the leading coefficient of z -> box(D + z 1_S),
// so each query costs |S|+1 box evaluations.
template <class F>
PMOracle<F> pm_shifted_inverse_fast(const PolyBox<F>& box, const std::vector<typename F::Elem>& D) {
    const F& f = box.field;
    auto det0 = box(D);
    if (f.is_zero(det0)) throw SingularShift();
    auto inv0 = f.inv(det0);
    return PMOracle<F>(f, iota_set(box.arity), [box, D, inv0](const IndexSet& S) -> typename F::Elem {
        const F& f = box.field;
        const int k = static_cast<int>(S.size());
        if (!f.has_more_than(static_cast<std::uint64_t>(k) + 1)) throw FieldTooSmall();
        auto w = leading_coeff_weights(f, k);
        auto pt = D;
        auto acc = f.zero();
        for (int m = 0; m <= k; ++m) {
            for (int i : S) pt[i] = D[i] + f.canonical(m + 1);
            acc += w[m] * box(pt);
        }
        return acc * inv0;
    });
}

// Literal route: minor queries through shifted_inverse_box and pm_query.
template <class F>
PMOracle<F> pm_shifted_inverse_literal(const PolyBox<F>& box, const std::vector<typename F::Elem>& D) {
    return pm_from_box(shifted_inverse_box(box, D));
}

// Memoizing wrapper; the inner oracle sees each subset once.
template <class F>
PMOracle<F> cached(const PMOracle<F>& pm) {
    using E = typename F::Elem;
    struct Store {
        std::mutex mu;
        std::unordered_map<std::uint64_t, E> small;
        std::map<IndexSet, E> large;
    };
    auto store = std::make_shared<Store>();
    return PMOracle<F>(pm.field, pm.I, [pm, store](const IndexSet& S) -> typename F::Elem {
        bool packable = S.size() <= 4;
        std::uint64_t key = 0;
        for (std::size_t i = 0; i < S.size() && packable; ++i) {
            if (S[i] < 0 || S[i] >= 0xfffe) packable = false;
            key |= static_cast<std::uint64_t>(S[i] + 1) << (16 * i);
        }
        {
            std::lock_guard<std::mutex> lock(store->mu);
            if (packable) {
                if (auto it = store->small.find(key); it != store->small.end()) return it->second;
            } else if (auto it = store->large.find(S); it != store->large.end()) {
                return it->second;
            }
        }
        E v = pm(S);
        std::lock_guard<std::mutex> lock(store->mu);
        if (packable)
            store->small.emplace(key, v);
        else
            store->large.emplace(S, v);
        return v;
    });
}

template <class F>
PMOracle<F> restrict_oracle(const PMOracle<F>& pm, IndexSet T) {
    PMOracle<F> out(pm.field, std::move(T), pm.fn);
    out.counter = pm.counter;
    return out;
}

// A[i,j] A[j,i] from a_i, a_j and det(A[{i,j}]).
template <class E>
E pair_product_from(const E& ai, const E& aj, const E& dij) {
    return ai * aj - dij;
}

// A[i,j]A[j,k]A[k,i] + A[i,k]A[k,j]A[j,i] from the seven minors on {i,j,k}.
template <class E>
E triple_sum_from(const E& ai, const E& aj, const E& ak, const E& dij, const E& dik, const E& djk, const E& dijk) {
    E pij = ai * aj - dij, pik = ai * ak - dik, pjk = aj * ak - djk;
    return dijk - ai * aj * ak + ai * pjk + aj * pik + ak * pij;
}

template <class F>
typename F::Elem pm_pair_product(const PMOracle<F>& pm, int i, int j) {
    auto ai = pm({i}), aj = pm({j});
    return pair_product_from(ai, aj, pm(IndexSet{std::min(i, j), std::max(i, j)}));
}

template <class F>
typename F::Elem pm_triple_sum(const PMOracle<F>& pm, int i, int j, int k) {
    IndexSet s{i, j, k};
    std::sort(s.begin(), s.end());
    auto a0 = pm({s[0]}), a1 = pm({s[1]}), a2 = pm({s[2]});
    return triple_sum_from(a0, a1, a2, pm({s[0], s[1]}), pm({s[0], s[2]}), pm({s[1], s[2]}), pm(s));
}

template <class F>
bool check_2x2_irreducible(const PMOracle<F>& pm, int i, int j) {
    return !pm.field.is_zero(pm_pair_product(pm, i, j));
}

// With det(B[{i,j}]+Y) = y_i y_j + alpha y_i + beta y_j + gamma, reducible
// iff gamma = alpha beta.
template <class F>
bool check_2x2_irreducible(const PolyBox<F>& box, int i, int j) {
    const F& f = box.field;
    std::vector<int> T{std::min(i, j), std::max(i, j)};
    auto z = f.zero(), o = f.one();
    auto gamma = restricted_eval(box, T, {z, z});
    typename F::Elem alpha = restricted_eval(box, T, {o, z}) - gamma;
    typename F::Elem beta = restricted_eval(box, T, {z, o}) - gamma;
    return gamma != alpha * beta;
}

} // namespace pmaplab
