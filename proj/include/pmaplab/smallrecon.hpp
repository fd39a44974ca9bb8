#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "oracle.hpp"
#include "parallel.hpp"

namespace pmaplab {

// Calls fn(S) for every nonempty S of the sorted set L with |S| <= k, in
// size-then-lexicographic order; stops early when fn returns false.
template <class Fn>
bool for_each_subset_upto(const IndexSet& L, int k, Fn&& fn) {
    const int m = static_cast<int>(L.size());
    IndexSet S;
    std::vector<int> idx;
    for (int size = 1; size <= std::min(k, m); ++size) {
        idx.resize(size);
        for (int i = 0; i < size; ++i) idx[i] = i;
        for (;;) {
            S.resize(size);
            for (int i = 0; i < size; ++i) S[i] = L[idx[i]];
            if (!fn(S)) return false;
            int i = size - 1;
            while (i >= 0 && idx[i] == m - size + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return true;
}

// det(A[S]) = det(B[S]) for every nonempty S with |S| <= 4.
template <class F>
bool pme_upto4(const PMOracle<F>& pmA, const Matrix<F>& b) {
    return for_each_subset_upto(b.labels(), 4, [&](const IndexSet& S) { return pmA(S) == minor(b, S); });
}

template <class F>
bool pme_upto4(const Matrix<F>& a, const Matrix<F>& b) {
    return for_each_subset_upto(b.labels(), 4, [&](const IndexSet& S) { return minor(a, S) == minor(b, S); });
}

// Canonical 2x2 reconstruction: B[i,j] = 1, B[j,i] = A[i,j]A[j,i].
template <class F>
Matrix<F> recon2(const PMOracle<F>& pm, int i, int j) {
    const F& f = pm.field;
    auto ai = pm({i}), aj = pm({j});
    typename F::Elem pp = pair_product_from(ai, aj, pm(IndexSet{std::min(i, j), std::max(i, j)}));
    if (f.is_zero(pp)) throw ZeroOffDiagonal("pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
    Matrix<F> b(f, IndexSet{std::min(i, j), std::max(i, j)});
    b.at(i, i) = ai;
    b.at(j, j) = aj;
    b.at(i, j) = f.one();
    b.at(j, i) = pp;
    return b;
}

// Candidates with row i equal to one off the diagonal; B[j,k] runs over the
// roots of a z^2 - b z + c.
template <class F>
std::vector<Matrix<F>> recon3(const PMOracle<F>& pm, int i, int j, int k) {
    using E = typename F::Elem;
    const F& f = pm.field;
    auto key = [](int x, int y) { return IndexSet{std::min(x, y), std::max(x, y)}; };
    E ai = pm({i}), aj = pm({j}), ak = pm({k});
    E dij = pm(key(i, j)), dik = pm(key(i, k)), djk = pm(key(j, k));
    IndexSet all{i, j, k};
    std::sort(all.begin(), all.end());
    E dijk = pm(all);
    E pij = pair_product_from(ai, aj, dij), pik = pair_product_from(ai, ak, dik), pjk = pair_product_from(aj, ak, djk);
    if (f.is_zero(pij) || f.is_zero(pik) || f.is_zero(pjk)) throw ZeroOffDiagonal();
    E tsum = triple_sum_from(ai, aj, ak, dij, dik, djk, dijk);
    E c = pij * pjk;
    auto roots = solve_quadratic(f, pik, tsum, c);
    if (roots.empty()) throw NoRoot();
    std::vector<Matrix<F>> out;
    for (const E& z : roots) {
        Matrix<F> b(f, all);
        b.at(i, i) = ai;
        b.at(j, j) = aj;
        b.at(k, k) = ak;
        b.at(i, j) = f.one();
        b.at(i, k) = f.one();
        b.at(j, i) = pij;
        b.at(k, i) = pik;
        b.at(j, k) = z;
        b.at(k, j) = pjk / z;
        out.push_back(std::move(b));
    }
    return out;
}

// The three ways to split a sorted quadruple {a,b,c,d} into two pairs:
// 0: ab|cd, 1: ac|bd, 2: ad|bc.
inline constexpr int kSplitPairs[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};

template <class F>
struct Family4 {
    std::array<int, 4> T{};
    std::vector<Matrix<F>> members;
    std::uint8_t split_mask = 0; // bit s set: split s is a cut of some member
};

template <class F>
std::uint8_t cut_splits(const Matrix<F>& c) {
    const auto& L = c.labels();
    std::uint8_t mask = 0;
    for (int s = 0; s < 3; ++s) {
        IndexSet P{L[kSplitPairs[s][0]], L[kSplitPairs[s][1]]}, Q{L[kSplitPairs[s][2]], L[kSplitPairs[s][3]]};
        std::sort(Q.begin(), Q.end());
        if (rank_at_most_one(c, P, Q) && rank_at_most_one(c, Q, P)) mask |= 1u << s;
    }
    return mask;
}

// All 4x4 matrices PME to A[T] with ones off the diagonal in the row of the
// smallest label, ordered lexicographically by their root triple.
template <class F>
Family4<F> family4(const PMOracle<F>& pm, IndexSet T) {
    using E = typename F::Elem;
    const F& f = pm.field;
    std::sort(T.begin(), T.end());
    if (T.size() != 4) throw std::invalid_argument("family4 needs four indices");
    // minors indexed by position bitmask
    std::array<E, 16> mn;
    mn.fill(f.one());
    for (unsigned mask = 1; mask < 16; ++mask) {
        IndexSet S;
        for (int p = 0; p < 4; ++p)
            if (mask >> p & 1) S.push_back(T[p]);
        mn[mask] = pm(S);
    }
    auto a = [&](int p) -> const E& { return mn[1u << p]; };
    auto pp = [&](int p, int q) -> E { return pair_product_from(a(p), a(q), mn[(1u << p) | (1u << q)]); };
    auto triple = [&](int p, int q, int r) -> E {
        return triple_sum_from(a(p), a(q), a(r), mn[(1u << p) | (1u << q)], mn[(1u << p) | (1u << r)],
                               mn[(1u << q) | (1u << r)], mn[(1u << p) | (1u << q) | (1u << r)]);
    };
    for (int p = 0; p < 4; ++p)
        for (int q = p + 1; q < 4; ++q)
            if (f.is_zero(pp(p, q)))
                throw ZeroOffDiagonal("at {" + std::to_string(T[0]) + "," + std::to_string(T[1]) + "," +
                                      std::to_string(T[2]) + "," + std::to_string(T[3]) + "}");
    const int pairs[3][2] = {{1, 2}, {1, 3}, {2, 3}};
    std::array<std::vector<E>, 3> roots;
    for (int s = 0; s < 3; ++s) {
        int i = pairs[s][0], j = pairs[s][1];
        E c = pp(0, i) * pp(i, j);
        roots[s] = solve_quadratic(f, pp(0, j), triple(0, i, j), c);
    }
    Family4<F> fam;
    std::copy(T.begin(), T.end(), fam.T.begin());
    Matrix<F> b(f, T);
    for (int p = 0; p < 4; ++p) b(p, p) = a(p);
    for (int q = 1; q < 4; ++q) {
        b(0, q) = f.one();
        b(q, 0) = pp(0, q);
    }
    for (const E& r12 : roots[0])
        for (const E& r13 : roots[1])
            for (const E& r23 : roots[2]) {
                const E* rs[3] = {&r12, &r13, &r23};
                for (int s = 0; s < 3; ++s) {
                    int i = pairs[s][0], j = pairs[s][1];
                    b(i, j) = *rs[s];
                    b(j, i) = pp(i, j) / *rs[s];
                }
                bool ok = true;
                for (unsigned mask = 1; mask < 16 && ok; ++mask) {
                    IndexSet S;
                    for (int p = 0; p < 4; ++p)
                        if (mask >> p & 1) S.push_back(T[p]);
                    ok = minor(b, S) == mn[mask];
                }
                if (ok) fam.members.push_back(b);
            }
    if (fam.members.size() > 8) throw std::logic_error("family larger than eight");
    for (const auto& m : fam.members) fam.split_mask |= cut_splits(m);
    return fam;
}

template <class F>
struct SubmatrixFamily {
    IndexSet I;
    std::vector<int> pos_of;               // label -> position in I, -1 outside
    std::vector<std::uint8_t> masks;       // by rank of the position quadruple
    std::vector<std::uint8_t> sizes;       // family sizes
    std::vector<Family4<F>> families;      // kept only on request
    std::vector<std::array<int, 4>> positive; // (i,j,k,l) labels with property P, lexicographic

    static std::uint64_t binom(std::uint64_t n, int k) {
        std::uint64_t r = 1;
        for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
        return n < static_cast<std::uint64_t>(k) ? 0 : r;
    }

    // rank of sorted positions p0 < p1 < p2 < p3 in the combinatorial number system
    std::size_t rank(std::array<int, 4> p) const {
        return binom(p[0], 1) + binom(p[1], 2) + binom(p[2], 3) + binom(p[3], 4);
    }

    std::size_t rank_of_labels(int w, int x, int y, int z) const {
        std::array<int, 4> p{pos_of[w], pos_of[x], pos_of[y], pos_of[z]};
        std::sort(p.begin(), p.end());
        return rank(p);
    }

    const Family4<F>& family(const IndexSet& T) const {
        if (families.empty()) throw std::logic_error("family members were not kept");
        return families[rank_of_labels(T[0], T[1], T[2], T[3])];
    }

    // Some member of the family at {i,j,k,l} has {i,j} as a cut.
    bool satisfies_P(int i, int j, int k, int l) const {
        std::array<int, 4> p{pos_of[i], pos_of[j], pos_of[k], pos_of[l]};
        std::array<int, 4> sorted = p;
        std::sort(sorted.begin(), sorted.end());
        // the partner of the smallest position decides the split
        int first = sorted[0];
        int partner = -1;
        for (int t = 0; t < 4; ++t)
            if (p[t] == first) partner = p[t ^ 1];
        int split = partner == sorted[1] ? 0 : partner == sorted[2] ? 1 : 2;
        return masks[rank(sorted)] >> split & 1;
    }
};

// Family of every 4-subset of I.
template <class F>
SubmatrixFamily<F> submatrix_family(const PMOracle<F>& pm, const IndexSet& I, bool keep_members = false) {
    if (I.size() < 4) throw std::invalid_argument("submatrix_family needs |I| >= 4");
    SubmatrixFamily<F> fam;
    fam.I = I;
    fam.pos_of.assign(I.back() + 1, -1);
    for (std::size_t p = 0; p < I.size(); ++p) fam.pos_of[I[p]] = static_cast<int>(p);
    const int m = static_cast<int>(I.size());
    std::vector<std::array<int, 4>> quads;
    quads.reserve(SubmatrixFamily<F>::binom(m, 4));
    // enumerate in rank order: p3 outermost
    for (int p3 = 3; p3 < m; ++p3)
        for (int p2 = 2; p2 < p3; ++p2)
            for (int p1 = 1; p1 < p2; ++p1)
                for (int p0 = 0; p0 < p1; ++p0) quads.push_back({p0, p1, p2, p3});
    fam.masks.assign(quads.size(), 0);
    fam.sizes.assign(quads.size(), 0);
    if (keep_members) fam.families.resize(quads.size());
    parallel_for(quads.size(), [&](std::size_t r) {
        const auto& q = quads[r];
        try {
            auto f4 = family4(pm, {I[q[0]], I[q[1]], I[q[2]], I[q[3]]});
            fam.masks[r] = f4.split_mask;
            fam.sizes[r] = static_cast<std::uint8_t>(f4.members.size());
            if (keep_members) fam.families[r] = std::move(f4);
        } catch (const ZeroOffDiagonal& e) {
            throw ZeroOffDiagonal(std::string("submatrix_family: ") + e.what());
        }
    });
    for (std::size_t r = 0; r < quads.size(); ++r) {
        if (!fam.masks[r]) continue;
        const auto& q = quads[r];
        for (int s = 0; s < 3; ++s) {
            if (!(fam.masks[r] >> s & 1)) continue;
            const int* sp = kSplitPairs[s];
            fam.positive.push_back({I[q[sp[0]]], I[q[sp[1]]], I[q[sp[2]]], I[q[sp[3]]]});
        }
    }
    std::sort(fam.positive.begin(), fam.positive.end());
    return fam;
}

} // namespace pmaplab
