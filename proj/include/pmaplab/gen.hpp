#pragma once

#include <algorithm>
#include <vector>

#include "field.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace pmaplab {

template <class F>
typename F::Elem random_nonzero(const F& f, Rng& rng) {
    for (;;) {
        typename F::Elem x = f.random(rng);
        if (!f.is_zero(x)) return x;
    }
}

// i.i.d. uniform entries, off-diagonal zeros resampled.
template <class F>
Matrix<F> gen_random_dense(const F& f, int n, Rng& rng) {
    Matrix<F> a(f, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a(r, c) = r == c ? f.random(rng) : random_nonzero(f, rng);
    return a;
}

// Dense matrix on [n] with a chain of nested cuts X_1 < X_2 < ... of the
// given sizes. Labels are shuffled, so cuts are random sets; they are
// returned through cuts_out when requested.
//
// Rows of X_t see everything outside X_t through multiples of one vector u
// restricted to X_t, and columns likewise through r; extending u and r level
// by level keeps every X_t a cut.
template <class F>
Matrix<F> gen_planted_cut(const F& f, int n, std::vector<int> sizes, Rng& rng,
                          std::vector<IndexSet>* cuts_out = nullptr) {
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    for (int k : sizes)
        if (k < 2 || k > n - 2) throw std::invalid_argument("planted cut size must lie in [2, n-2]");
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    sizes.push_back(n);

    Matrix<F> a(f, n);
    std::vector<typename F::Elem> u(n, f.zero()), r(n, f.zero());
    int done = 0;
    for (int k : sizes) {
        // new group perm[done..k)
        for (int x = done; x < k; ++x)
            for (int y = done; y < k; ++y)
                a(perm[x], perm[y]) = x == y ? f.random(rng) : random_nonzero(f, rng);
        if (done > 0) {
            for (int y = done; y < k; ++y) {
                typename F::Elem w = random_nonzero(f, rng), s = random_nonzero(f, rng);
                for (int x = 0; x < done; ++x) {
                    a(perm[x], perm[y]) = u[perm[x]] * w;
                    a(perm[y], perm[x]) = s * r[perm[x]];
                }
            }
        }
        for (int x = done; x < k; ++x) {
            u[perm[x]] = random_nonzero(f, rng);
            r[perm[x]] = random_nonzero(f, rng);
        }
        if (cuts_out && k < n) {
            IndexSet X(perm.begin(), perm.begin() + k);
            std::sort(X.begin(), X.end());
            cuts_out->push_back(X);
        }
        done = k;
    }
    return a;
}

// The 1/2 pair agreeing on every principal minor of order < n but not on
// det: A is all ones except A[1,0] = A[2,3] = 2, a symmetric chain of 2s
// through 3, 4, ..., n-1 and A[0,n-1] = A[n-1,0] = 2; B swaps A[0,1], A[1,0].
template <class F>
std::pair<Matrix<F>, Matrix<F>> necessity_pair(const F& f, int n) {
    if (n < 5) throw std::invalid_argument("necessity_pair needs n >= 5");
    Matrix<F> a(f, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a(r, c) = f.one();
    const auto two = f.from_int(2);
    a(1, 0) = two;
    a(2, 3) = two;
    for (int i = 4; i < n; ++i) a(i - 1, i) = a(i, i - 1) = two;
    a(0, n - 1) = a(n - 1, 0) = two;
    Matrix<F> b = a;
    b(0, 1) = two;
    b(1, 0) = f.one();
    return {a, b};
}

} // namespace pmaplab
