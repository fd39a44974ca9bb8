#pragma once

#include <pmaplab/gen.hpp>
#include <pmaplab/matrix.hpp>
#include <pmaplab/rng.hpp>

namespace testsupport {

using namespace pmaplab;

template <class F>
Matrix<F> random_matrix(const F& f, int n, Rng& rng, bool dense = true) {
    Matrix<F> a(f, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            do {
                a(r, c) = f.random(rng);
            } while (dense && r != c && f.is_zero(a(r, c)));
        }
    return a;
}

template <class F>
Matrix<F> from_ints(const F& f, const std::vector<std::vector<long long>>& rows) {
    Matrix<F> a(f, static_cast<int>(rows.size()));
    for (int r = 0; r < a.n(); ++r)
        for (int c = 0; c < a.n(); ++c) a(r, c) = f.from_int(rows[r][c]);
    return a;
}

// Cofactor expansion along the first row; independent of the elimination code.
template <class F>
typename F::Elem cofactor_det(const F& f, const std::vector<typename F::Elem>& m, int k) {
    if (k == 0) return f.one();
    if (k == 1) return m[0];
    auto acc = f.zero();
    std::vector<typename F::Elem> sub;
    for (int j = 0; j < k; ++j) {
        if (f.is_zero(m[j])) continue;
        sub.clear();
        for (int r = 1; r < k; ++r)
            for (int c = 0; c < k; ++c)
                if (c != j) sub.push_back(m[r * k + c]);
        typename F::Elem t = m[j] * cofactor_det(f, sub, k - 1);
        if (j % 2)
            acc -= t;
        else
            acc += t;
    }
    return acc;
}

template <class F>
typename F::Elem cofactor_minor(const Matrix<F>& a, const IndexSet& S) {
    return cofactor_det(a.field(), a.block(S, S), static_cast<int>(S.size()));
}

// Cofactor expansion for small subsets, elimination above that.
template <class F>
typename F::Elem ref_minor(const Matrix<F>& a, const IndexSet& S) {
    return S.size() <= 7 ? cofactor_minor(a, S) : minor(a, S);
}

// All 2^n - 1 principal minors compared.
template <class F>
bool brute_pme(const Matrix<F>& a, const Matrix<F>& b) {
    const int n = a.n();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        IndexSet S;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) S.push_back(a.labels()[i]);
        if (ref_minor(a, S) != ref_minor(b, S)) return false;
    }
    return true;
}

enum class PairKind { diag_similar, transpose, cut_chain, block_swap, perturbed };

// Pairs that are PME by construction, or a single-entry perturbation of one.
template <class F>
std::pair<Matrix<F>, Matrix<F>> make_pair_case(const F& f, int n, PairKind kind, Rng& rng) {
    auto diag_sim = [&](const Matrix<F>& a) {
        std::vector<typename F::Elem> d(n);
        for (auto& x : d) x = random_nonzero(f, rng);
        return diag_conjugate(a, d);
    };
    switch (kind) {
    case PairKind::diag_similar: {
        auto a = random_matrix(f, n, rng, rng.below(2));
        return {a, diag_sim(a)};
    }
    case PairKind::transpose: {
        auto a = random_matrix(f, n, rng);
        return {a, a.transpose()};
    }
    case PairKind::cut_chain: {
        if (n < 4) return make_pair_case(f, n, PairKind::diag_similar, rng);
        std::vector<IndexSet> cuts;
        std::vector<int> sizes{2 + static_cast<int>(rng.below(n - 3))};
        if (n >= 6 && sizes[0] + 2 <= n - 2 && rng.below(2)) sizes.push_back(sizes[0] + 2);
        auto a = gen_planted_cut(f, n, sizes, rng, &cuts);
        auto b = a;
        int steps = 1 + static_cast<int>(rng.below(3));
        for (int s = 0; s < steps; ++s) {
            IndexSet X = cuts[rng.below(cuts.size())];
            if (rng.below(2)) X = set_minus(b.labels(), X);
            b = cut_transpose(b, X);
        }
        return {a, rng.below(2) ? diag_sim(b) : b};
    }
    case PairKind::block_swap: {
        // block triangular with the coupling moved to the other side
        if (n < 2) return make_pair_case(f, n, PairKind::diag_similar, rng);
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
        int k = 1 + static_cast<int>(rng.below(n - 1));
        IndexSet X1(perm.begin(), perm.begin() + k), X2(perm.begin() + k, perm.end());
        std::sort(X1.begin(), X1.end());
        std::sort(X2.begin(), X2.end());
        Matrix<F> a(f, n), b(f, n);
        for (auto* X : {&X1, &X2})
            for (int r : *X)
                for (int c : *X) a(r, c) = b(r, c) = r == c ? f.random(rng) : random_nonzero(f, rng);
        for (int r : X1)
            for (int c : X2) {
                a(r, c) = f.random(rng);
                b(c, r) = f.random(rng);
            }
        return {a, b};
    }
    case PairKind::perturbed: {
        auto base = make_pair_case(f, n, static_cast<PairKind>(rng.below(4)), rng);
        int r = static_cast<int>(rng.below(n)), c = static_cast<int>(rng.below(n));
        base.second(r, c) += random_nonzero(f, rng);
        return base;
    }
    }
    throw std::logic_error("unknown pair kind");
}

} // namespace testsupport
