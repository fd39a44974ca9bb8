#pragma once

#include <optional>
#include <vector>

#include "cutfinder.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "oracle.hpp"
#include "smallrecon.hpp"

namespace pmaplab {

struct ReconStats {
    long long combines = 0;
    long long no_cut_calls = 0;
    long long candidates_tried = 0;
    int max_depth = 0;
};

struct NoCutSequence {
    int r = 0, s = 0;
    std::vector<int> seq; // (i_m, ..., i_3)
};

// Peels one index at a time, always the smallest e outside {r,s} whose
// removal leaves no plausible set.
template <class F>
NoCutSequence no_cut_sequence(IndexSet I, const SubmatrixFamily<F>& fam, int r, int s) {
    if (I.size() < 4) throw std::invalid_argument("no_cut_sequence needs |I| >= 4");
    NoCutSequence out{r, s, {}};
    while (I.size() > 4) {
        int pick = -1;
        for (int e : I) {
            if (e == r || e == s) continue;
            if (!find_plausible_set(without_elem(I, e), fam)) {
                pick = e;
                break;
            }
        }
        if (pick < 0) throw NoRemovableIndex("no index of {" + std::to_string(I.size()) + " labels} can be dropped");
        out.seq.push_back(pick);
        I = without_elem(I, pick);
    }
    for (int e : I)
        if (e != r && e != s) out.seq.push_back(e);
    return out;
}

namespace detail {

// Order <= 4 minors of b against pm, restricted to subsets containing k.
template <class F>
bool pme_upto4_through(const PMOracle<F>& pm, const Matrix<F>& b, int k) {
    IndexSet rest = without_elem(b.labels(), k);
    if (pm({k}) != b.at(k, k)) return false;
    return for_each_subset_upto(rest, 3, [&](const IndexSet& T) {
        IndexSet S = with_elem(T, k);
        return pm(S) == minor(b, S);
    });
}

} // namespace detail

// Iterative reconstruction of a no-cut block; row i_1 of the result is all
// ones off the diagonal.
template <class F>
Matrix<F> reconstruct_no_cut(const IndexSet& I, const SubmatrixFamily<F>& fam, const PMOracle<F>& pm,
                             ReconStats* stats = nullptr) {
    using E = typename F::Elem;
    const F& f = pm.field;
    if (I.size() < 4) throw std::invalid_argument("reconstruct_no_cut needs |I| >= 4");
    if (stats) ++stats->no_cut_calls;
    const int i1 = I[0], i2 = I[1];
    auto top = no_cut_sequence(I, fam, i1, i2);
    std::vector<int> order{i1, i2};
    order.insert(order.end(), top.seq.rbegin(), top.seq.rend());

    auto key = [](int x, int y) { return IndexSet{std::min(x, y), std::max(x, y)}; };
    auto pp = [&](int x, int y) -> E { return pair_product_from(pm({x}), pm({y}), pm(key(x, y))); };
    auto triple = [&](int x, int y, int z) -> E { return pm_triple_sum(pm, x, y, z); };

    Matrix<F> B(f, I);
    B.at(i1, i1) = pm({i1});
    B.at(i2, i2) = pm({i2});
    B.at(i1, i2) = f.one();
    B.at(i2, i1) = pp(i1, i2);

    const int m = static_cast<int>(order.size());
    IndexSet Ij{i1, i2};
    std::sort(Ij.begin(), Ij.end());
    for (int jj = 2; jj < m; ++jj) {
        const int ij = order[jj];
        B.at(ij, ij) = pm({ij});
        B.at(i1, ij) = f.one();
        B.at(ij, i1) = pp(i1, ij);
        Ij = with_elem(Ij, ij);

        std::vector<int> ks; // k_3, k_4, ..., k_j
        if (jj == 2) {
            ks = {i2};
        } else {
            auto inner = no_cut_sequence(Ij, fam, i1, ij);
            ks.assign(inner.seq.rbegin(), inner.seq.rend());
        }

        IndexSet Lprev{std::min(i1, ij), std::max(i1, ij)};
        for (int kl : ks) {
            IndexSet L = with_elem(Lprev, kl);
            E a = pp(i1, kl), b = triple(i1, ij, kl);
            E pjk = pp(ij, kl);
            E c = pp(i1, ij) * pjk;
            auto roots = solve_quadratic(f, a, b, c);

            Matrix<F> B1 = B.principal(L);
            Matrix<F> B2 = B1;
            std::vector<E> D;
            for (int x : Lprev) D.push_back(x == i1 ? f.one() : B.at(x, i1));
            for (std::size_t x = 0; x < Lprev.size(); ++x)
                for (std::size_t y = 0; y < Lprev.size(); ++y)
                    B2.at(Lprev[x], Lprev[y]) = D[x] * B.at(Lprev[y], Lprev[x]) / D[y];

            bool accepted = false;
            for (Matrix<F>* Bs : {&B1, &B2}) {
                for (const E& g : roots) {
                    if (stats) ++stats->candidates_tried;
                    Bs->at(ij, kl) = g;
                    Bs->at(kl, ij) = pjk / g;
                    // minors avoiding kl match already: Bs[Lprev] is B[Lprev] or a
                    // diagonal conjugate of its transpose, and B[Lprev] passed before
                    if (detail::pme_upto4_through(pm, *Bs, kl)) {
                        for (int x : L)
                            for (int y : L) B.at(x, y) = Bs->at(x, y);
                        accepted = true;
                        break;
                    }
                }
                if (accepted) break;
            }
            if (!accepted)
                throw NoCandidateAccepted("at i_j = " + std::to_string(ij) + ", k = " + std::to_string(kl));
            Lprev = L;
        }
    }
    return B;
}

// The combined matrix A' on S u Sbar from M ~ A[S+t] and N ~ A[Sbar+s].
template <class F>
Matrix<F> combine_across_cut(const Matrix<F>& M, const Matrix<F>& N, const IndexSet& S, int s, int t) {
    const F& f = M.field();
    if (f.is_zero(N.at(s, t)) || f.is_zero(N.at(t, s))) throw ZeroCouplingEntry();
    IndexSet Sb = without_elem(N.labels(), s);
    Matrix<F> out(f, set_union(S, Sb));
    auto nst = f.inv(N.at(s, t)), nts = f.inv(N.at(t, s));
    for (int x : S)
        for (int y : S) out.at(x, y) = M.at(x, y);
    for (int x : Sb)
        for (int y : Sb) out.at(x, y) = N.at(x, y);
    for (int x : S)
        for (int y : Sb) {
            out.at(x, y) = M.at(x, t) * N.at(s, y) * nst;
            out.at(y, x) = N.at(y, s) * nts * M.at(t, x);
        }
    return out;
}

namespace detail {

template <class F>
Matrix<F> reconstruct_rec(const IndexSet& J, const SubmatrixFamily<F>* fam, const PMOracle<F>& pm,
                          ReconStats* stats, int depth) {
    if (stats) stats->max_depth = std::max(stats->max_depth, depth);
    if (J.size() == 1) {
        Matrix<F> b(pm.field, J);
        b(0, 0) = pm(J);
        return b;
    }
    if (J.size() == 2) return recon2(pm, J[0], J[1]);
    if (J.size() == 3) return recon3(pm, J[0], J[1], J[2]).front();
    auto ps = minimal_plausible_set(J, *fam);
    if (!ps) return reconstruct_no_cut(J, *fam, pm, stats);
    const IndexSet& S = ps->S;
    IndexSet Sb = set_minus(J, S);
    const int s = S.front(), t = Sb.front();
    Matrix<F> M = reconstruct_rec(with_elem(S, t), fam, pm, stats, depth + 1);
    Matrix<F> N = reconstruct_rec(with_elem(Sb, s), fam, pm, stats, depth + 1);
    if (stats) ++stats->combines;
    return combine_across_cut(M, N, S, s, t);
}

} // namespace detail

// PMAP for a dense block with property R, from order <= 4 minors only.
template <class F>
Matrix<F> reconstruct_prop_R(const PMOracle<F>& pm_in, IndexSet I, ReconStats* stats = nullptr) {
    std::sort(I.begin(), I.end());
    if (I.empty()) throw std::invalid_argument("reconstruct_prop_R needs a nonempty index set");
    auto pm = cached(pm_in);
    if (I.size() < 4) return detail::reconstruct_rec<F>(I, nullptr, pm, stats, 0);
    auto fam = submatrix_family(pm, I);
    return detail::reconstruct_rec(I, &fam, pm, stats, 0);
}

// Dense plus the rank-one extension property, by exhaustive search.
template <class F>
bool verify_property_R(const Matrix<F>& a) {
    const int n = a.n();
    if (n > 16) throw TooLarge("verify_property_R: n = " + std::to_string(n));
    if (!is_dense(a)) return false;
    if (n < 4) return true;
    const IndexSet& L = a.labels();
    std::vector<std::uint32_t> rank_one; // X with rank A[X, Xbar] <= 1
    for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
        IndexSet X, Xb;
        for (int p = 0; p < n; ++p) (mask >> p & 1 ? X : Xb).push_back(L[p]);
        if (X.size() >= 2 && Xb.size() >= 2 && rank_at_most_one(a, X, Xb)) rank_one.push_back(mask);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = k + 1; l < n; ++l) {
                    if (k == i || k == j || l == i || l == j) continue;
                    if (!rank_at_most_one(a, IndexSet{L[i], L[j]}, IndexSet{L[k], L[l]})) continue;
                    std::uint32_t in = (1u << i) | (1u << j), out = (1u << k) | (1u << l);
                    bool ok = false;
                    for (auto X : rank_one)
                        if ((X & in) == in && (X & out) == 0) {
                            ok = true;
                            break;
                        }
                    if (!ok) return false;
                }
    return true;
}

} // namespace pmaplab
