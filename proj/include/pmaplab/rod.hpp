#pragma once

#include <optional>
#include <vector>

#include "errors.hpp"
#include "gen.hpp"
#include "matrix.hpp"
#include "oracle.hpp"
#include "parallel.hpp"
#include "pmap.hpp"
#include "rng.hpp"

namespace pmaplab {

// det(B0 + sum_i y_i u_i v_i^T) with r x r matrices.
template <class F>
struct RodInstance {
    using E = typename F::Elem;
    F field;
    int n = 0, r = 0;
    Matrix<F> B0;
    std::vector<std::vector<E>> u, v; // n vectors of length r each

    RodInstance(const F& f, int n_, int r_) : field(f), n(n_), r(r_), B0(f, r_), u(n_), v(n_) {}

    Matrix<F> at(const std::vector<E>& y) const {
        Matrix<F> m = B0;
        for (int i = 0; i < n; ++i) {
            if (field.is_zero(y[i])) continue;
            for (int a = 0; a < r; ++a) {
                if (field.is_zero(u[i][a])) continue;
                E s = y[i] * u[i][a];
                for (int b = 0; b < r; ++b) m(a, b) += s * v[i][b];
            }
        }
        return m;
    }
    E eval(const std::vector<E>& y) const { return det(at(y)); }

    Matrix<F> rank1(int i) const {
        Matrix<F> m(field, r);
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b) m(a, b) = u[i][a] * v[i][b];
        return m;
    }
};

template <class F>
PolyBox<F> rod_box(const RodInstance<F>& inst) {
    return PolyBox<F>(inst.field, inst.n, inst.n,
                      [inst](const std::vector<typename F::Elem>& y) -> typename F::Elem { return inst.eval(y); });
}

// Random U, V in F^{r x n} and B0 in F^{r x r}.
template <class F>
RodInstance<F> gen_rod_instance(const F& f, int n, int r, Rng& rng) {
    if (r < 1 || n < 1) throw std::invalid_argument("gen_rod_instance needs n, r >= 1");
    RodInstance<F> inst(f, n, r);
    for (int i = 0; i < n; ++i) {
        inst.u[i].resize(r);
        inst.v[i].resize(r);
        for (auto& x : inst.u[i]) x = f.random(rng);
        for (auto& x : inst.v[i]) x = f.random(rng);
    }
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) inst.B0(a, b) = f.random(rng);
    return inst;
}

// f'(y, t) = t_1...t_n f(y_1/t_1, ..., y_n/t_n), variables ordered
// (y_1..y_n, t_1..t_n). Zero t coordinates go through eval_with_inversions.
template <class F>
PolyBox<F> homogenize_box(const PolyBox<F>& box, int n) {
    using E = typename F::Elem;
    const F& f = box.field;
    if (!f.has_more_than(static_cast<std::uint64_t>(n) + 1)) throw FieldTooSmall("homogenize_box needs |F| > n+1");
    PolyBox<F> raw(f, 2 * n, n, [box, n](const std::vector<E>& yt) -> E {
        const F& f = box.field;
        std::vector<E> y(n);
        E prod = f.one();
        for (int i = 0; i < n; ++i) {
            y[i] = yt[i] / yt[n + i];
            prod *= yt[n + i];
        }
        return prod * box(y);
    });
    std::vector<bool> inv(2 * n, false);
    for (int i = n; i < 2 * n; ++i) inv[i] = true;
    PolyBox<F> out(f, 2 * n, n, [raw, inv](const std::vector<E>& yt) -> E { return eval_with_inversions(raw, yt, inv); });
    return out;
}

template <class F>
struct IsolationContext {
    using E = typename F::Elem;
    int n = 0;
    std::vector<int> weights;   // 2n weights
    std::vector<bool> select_y; // z_i = y_i when true, t_i otherwise
    int W = 0;                  // minimum weight
    E gamma;
    int attempts = 0;
};

namespace detail {

// Coefficients of x -> box(x^{w_1}, ..., x^{w_m}) with `zeroed` set to 0.
template <class F>
std::vector<typename F::Elem> weighted_univariate(const PolyBox<F>& box, const std::vector<int>& w, int zeroed,
                                                  int deg) {
    using E = typename F::Elem;
    const F& f = box.field;
    std::vector<E> xs, ys;
    for (int m = 1; m <= deg + 1; ++m) {
        E x = f.canonical(m);
        std::vector<E> pt(w.size());
        for (std::size_t v = 0; v < w.size(); ++v) pt[v] = static_cast<int>(v) == zeroed ? f.zero() : f.pow(x, w[v]);
        xs.push_back(x);
        ys.push_back(box(pt));
    }
    return interpolate(f, xs, ys);
}

} // namespace detail

// Picks weights in [1, 4n], finds the minimum weight W with a nonzero
// coefficient, and reads off the monomial by zeroing one variable at a time.
template <class F>
IsolationContext<F> isolate_monomial(const PolyBox<F>& box2n, int n, const Rng& rng, int max_tries = 16) {
    using E = typename F::Elem;
    const F& f = box2n.field;
    const int deg = 4 * n * n;
    if (!f.has_more_than(static_cast<std::uint64_t>(deg) + 1)) throw FieldTooSmall("isolation needs |F| > 4n^2+1");
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        Rng wr = rng.stream("isolation", attempt);
        IsolationContext<F> ctx;
        ctx.n = n;
        ctx.attempts = attempt + 1;
        ctx.weights.resize(2 * n);
        for (auto& w : ctx.weights) w = static_cast<int>(wr.range(1, 4 * n));
        auto full = detail::weighted_univariate(box2n, ctx.weights, -1, deg);
        int W = -1;
        for (int e = 0; e <= deg; ++e)
            if (!f.is_zero(full[e])) {
                W = e;
                break;
            }
        if (W < 0) throw IsolationFailed("polynomial is identically zero");
        ctx.W = W;
        auto survives = parallel_map<char>(2 * n, [&](std::size_t v) -> char {
            auto c = detail::weighted_univariate(box2n, ctx.weights, static_cast<int>(v), deg);
            return !f.is_zero(c[W]);
        });
        bool ok = true;
        ctx.select_y.assign(n, false);
        for (int i = 0; i < n && ok; ++i) {
            bool in_y = !survives[i], in_t = !survives[n + i];
            if (in_y == in_t) ok = false;
            ctx.select_y[i] = in_y;
        }
        if (!ok) continue;
        int wsum = 0;
        std::vector<E> pt(2 * n, f.zero());
        for (int i = 0; i < n; ++i) {
            int v = ctx.select_y[i] ? i : n + i;
            pt[v] = f.one();
            wsum += ctx.weights[v];
        }
        if (wsum != W) continue;
        ctx.gamma = box2n(pt);
        if (ctx.gamma != full[W]) continue;
        return ctx;
    }
    throw IsolationFailed("after " + std::to_string(max_tries) + " weight draws");
}

// h(z) = gamma^{-1} f'(z at the selected slots, 1 at the complements).
template <class F>
PolyBox<F> reduced_box(const PolyBox<F>& box2n, const IsolationContext<F>& ctx) {
    using E = typename F::Elem;
    const int n = ctx.n;
    E ginv = box2n.field.inv(ctx.gamma);
    auto sel = ctx.select_y;
    PolyBox<F> h(box2n.field, n, n, [box2n, sel, ginv, n](const std::vector<E>& z) -> E {
        const F& f = box2n.field;
        std::vector<E> pt(2 * n, f.one());
        for (int i = 0; i < n; ++i) pt[sel[i] ? i : n + i] = z[i];
        return ginv * box2n(pt);
    });
    return h;
}

template <class F>
std::pair<PolyBox<F>, IsolationContext<F>> reduce_rod_to_pmap(const PolyBox<F>& box, int n, const Rng& rng) {
    auto box2n = homogenize_box(box, n);
    auto ctx = isolate_monomial(box2n, n, rng);
    return {reduced_box(box2n, ctx), ctx};
}

// B_i = e_i r_{y_i}^T and B_0 = sum e_i r_{t_i}^T, first rows scaled by gamma,
// where r is the matching row of [I; A'].
template <class F>
RodInstance<F> lift_pmap_solution(const IsolationContext<F>& ctx, const Matrix<F>& Ap) {
    using E = typename F::Elem;
    const F& f = Ap.field();
    const int n = ctx.n;
    RodInstance<F> inst(f, n, n);
    auto unit = [&](int i) {
        std::vector<E> e(n, f.zero());
        e[i] = f.one();
        return e;
    };
    auto arow = [&](int i) {
        std::vector<E> row(n);
        for (int c = 0; c < n; ++c) row[c] = Ap(i, c);
        return row;
    };
    for (int i = 0; i < n; ++i) {
        inst.u[i] = unit(i);
        if (i == 0) inst.u[i][0] = ctx.gamma;
        inst.v[i] = ctx.select_y[i] ? unit(i) : arow(i);
        auto t_row = ctx.select_y[i] ? arow(i) : unit(i);
        E scale = i == 0 ? ctx.gamma : f.one();
        for (int c = 0; c < n; ++c) inst.B0(i, c) = scale * t_row[c];
    }
    return inst;
}

// A' = U^{-1} B0 (V^T)^{-1} from B_i = u_i v_i^T.
template <class F>
Matrix<F> pmap_to_rod_extract(const RodInstance<F>& inst) {
    const F& f = inst.field;
    if (inst.r != inst.n) throw NotPmapShaped("r = " + std::to_string(inst.r) + " but n = " + std::to_string(inst.n));
    const int n = inst.n;
    Matrix<F> U(f, n), Vt(f, n);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a) {
            U(a, i) = inst.u[i][a];
            Vt(i, a) = inst.v[i][a];
        }
    auto Ui = inverse(U), Vti = inverse(Vt);
    if (!Ui || !Vti) throw NotPmapShaped("U or V is singular");
    if (det(U) * det(Vt) != f.one()) throw NotPmapShaped("coefficient of y_1...y_n is not 1");
    return *Ui * inst.B0 * *Vti;
}

struct RodStats {
    int attempts = 0;
    int isolation_draws = 0;
    PmapStats pmap;
};

// Isolation, black-box PMAP on the reduced box, lift, then agreement with
// the input box at random points; retried with fresh randomness.
template <class F>
RodInstance<F> learn_rod(const PolyBox<F>& box, int n, const Rng& rng, RodStats* stats = nullptr,
                         int max_retries = 8, int check_points = 16) {
    using E = typename F::Elem;
    const F& f = box.field;
    RodStats local;
    RodStats& st = stats ? *stats : local;
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        st.attempts = attempt + 1;
        Rng ar = rng.stream("learn", attempt);
        try {
            auto [h, ctx] = reduce_rod_to_pmap(box, n, ar);
            st.isolation_draws += ctx.attempts;
            auto Ap = solve_blackbox_pmap(h, n, ar.stream("pmap"), &st.pmap);
            auto inst = lift_pmap_solution(ctx, Ap);
            Rng chk = ar.stream("check");
            bool ok = true;
            for (int k = 0; k < check_points && ok; ++k) {
                std::vector<E> y(n);
                for (auto& x : y) x = f.random(chk);
                ok = inst.eval(y) == box(y);
            }
            if (ok) return inst;
        } catch (const Error&) {
        }
    }
    throw RetriesExhausted("learn_rod after " + std::to_string(max_retries) + " attempts");
}

} // namespace pmaplab
