#pragma once

#include <array>
#include <optional>
#include <vector>

#include "combinat.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "smallrecon.hpp"

namespace pmaplab {

struct PlausibleSet {
    IndexSet S;
    std::array<int, 4> quad{}; // (i, j, k, l): i,j in S and k,l outside
    IndexSet free;             // labels carrying the 2-SAT variables
    TwoSat phi;
    std::vector<bool> assignment;
};

namespace detail {

// Core of the cut finding loop. P(a,b,c,d) answers property P for the pair
// {a,b} against {c,d}; candidates lists the quadruples to try, in order.
template <class Pred>
std::optional<PlausibleSet> plausible_search(const IndexSet& J, const std::vector<std::array<int, 4>>& candidates,
                                             Pred&& P) {
    for (const auto& t : candidates) {
        const int i = t[0], j = t[1], k = t[2], l = t[3];
        PlausibleSet ps;
        ps.quad = t;
        for (int e : J)
            if (e != i && e != j && e != k && e != l) ps.free.push_back(e);
        const int m = static_cast<int>(ps.free.size());
        ps.phi = TwoSat(m);
        for (int v = 0; v < m; ++v) {
            int e = ps.free[v];
            if (!P(i, j, k, e) || !P(i, j, l, e)) ps.phi.add_unit({v, true});
        }
        for (int v = 0; v < m; ++v) {
            int e = ps.free[v];
            if (!P(i, e, k, l) || !P(j, e, k, l)) ps.phi.add_unit({v, false});
        }
        for (int vp = 0; vp < m; ++vp)
            for (int vq = 0; vq < m; ++vq) {
                if (vp == vq) continue;
                int p = ps.free[vp], q = ps.free[vq];
                bool bad = false;
                for (int a : {i, j})
                    for (int c : {k, l})
                        if (!bad && !P(a, p, c, q)) bad = true;
                if (bad) ps.phi.add({vq, true}, {vp, false});
            }
        auto x = two_sat_solve(ps.phi);
        if (!x) continue;
        ps.assignment = *x;
        ps.S = {i, j};
        for (int v = 0; v < m; ++v)
            if (ps.assignment[v]) ps.S.push_back(ps.free[v]);
        std::sort(ps.S.begin(), ps.S.end());
        return ps;
    }
    return std::nullopt;
}

inline bool all_in(const IndexSet& J, const std::array<int, 4>& t) {
    for (int x : t)
        if (!contains(J, x)) return false;
    return true;
}

} // namespace detail

// Property P at {{i,j},{k,l}}.
template <class F>
bool satisfies_P(const SubmatrixFamily<F>& fam, int i, int j, int k, int l) {
    return fam.satisfies_P(i, j, k, l);
}

// Black-box cut finding over the labels J (a subset of fam.I, |J| >= 4).
// Quadruples failing P are skipped outright, so only the positive list is
// walked.
template <class F>
std::optional<PlausibleSet> find_plausible_set(const IndexSet& J, const SubmatrixFamily<F>& fam) {
    if (J.size() < 4) throw std::invalid_argument("find_plausible_set needs |I| >= 4");
    std::vector<std::array<int, 4>> cand;
    for (const auto& t : fam.positive)
        if (detail::all_in(J, t)) cand.push_back(t);
    if (cand.empty()) return std::nullopt;
    return detail::plausible_search(J, cand, [&](int a, int b, int c, int d) { return fam.satisfies_P(a, b, c, d); });
}

template <class F>
std::optional<PlausibleSet> find_plausible_set(const SubmatrixFamily<F>& fam) {
    return find_plausible_set(fam.I, fam);
}

inline PlausibleSet minimize_plausible(PlausibleSet ps) {
    ps.assignment = minimal_true_assignment(ps.phi, ps.assignment);
    ps.S = {ps.quad[0], ps.quad[1]};
    for (std::size_t v = 0; v < ps.free.size(); ++v)
        if (ps.assignment[v]) ps.S.push_back(ps.free[v]);
    std::sort(ps.S.begin(), ps.S.end());
    return ps;
}

template <class F>
std::optional<PlausibleSet> minimal_plausible_set(const IndexSet& J, const SubmatrixFamily<F>& fam) {
    auto ps = find_plausible_set(J, fam);
    if (!ps) return std::nullopt;
    return minimize_plausible(std::move(*ps));
}

// {i,j} is a cut of A[{i,j,k,l}].
template <class F>
bool quad_has_cut(const Matrix<F>& a, int i, int j, int k, int l) {
    IndexSet P{std::min(i, j), std::max(i, j)}, Q{std::min(k, l), std::max(k, l)};
    return rank_at_most_one(a, P, Q) && rank_at_most_one(a, Q, P);
}

// Explicit-matrix variant: P replaced by the cut test on A[{i,j,k,l}].
// Results that are not genuine cuts of A are skipped.
template <class F>
std::optional<IndexSet> find_cut_explicit(const Matrix<F>& a) {
    const IndexSet& J = a.labels();
    const int n = static_cast<int>(J.size());
    if (n < 4) return std::nullopt;
    auto P = [&](int i, int j, int k, int l) { return quad_has_cut(a, i, j, k, l); };
    std::vector<std::array<int, 4>> cand;
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y)
            for (int z = x + 1; z < n; ++z)
                for (int w = z + 1; w < n; ++w) {
                    if (z == y || w == y) continue;
                    if (P(J[x], J[y], J[z], J[w])) cand.push_back({J[x], J[y], J[z], J[w]});
                }
    std::sort(cand.begin(), cand.end());
    for (const auto& t : cand) {
        auto ps = detail::plausible_search(J, {t}, P);
        if (ps && is_cut(a, ps->S)) return ps->S;
    }
    return std::nullopt;
}

// Lexicographically first X with 2 <= |X| <= n-2 that is a cut of A.
template <class F>
std::optional<IndexSet> has_cut_bruteforce(const Matrix<F>& a) {
    const IndexSet& L = a.labels();
    const int n = static_cast<int>(L.size());
    if (n > 16) throw TooLarge("has_cut_bruteforce: n = " + std::to_string(n));
    if (n < 4) return std::nullopt;
    std::optional<IndexSet> best;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        int size = __builtin_popcount(mask);
        if (size < 2 || size > n - 2) continue;
        IndexSet X;
        for (int p = 0; p < n; ++p)
            if (mask >> p & 1) X.push_back(L[p]);
        if (best && !(X < *best)) continue;
        if (is_cut(a, X)) best = X;
    }
    return best;
}

} // namespace pmaplab
