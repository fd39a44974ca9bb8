#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "combinat.hpp"
#include "errors.hpp"
#include "field.hpp"

namespace pmaplab {

using IndexSet = std::vector<int>;

inline IndexSet iota_set(int n, int start = 0) {
    IndexSet s(n);
    std::iota(s.begin(), s.end(), start);
    return s;
}

inline IndexSet set_minus(const IndexSet& a, const IndexSet& b) {
    IndexSet r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}
inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
    IndexSet r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}
inline IndexSet with_elem(IndexSet a, int e) {
    a.insert(std::upper_bound(a.begin(), a.end(), e), e);
    return a;
}
inline IndexSet without_elem(IndexSet a, int e) {
    auto it = std::lower_bound(a.begin(), a.end(), e);
    if (it != a.end() && *it == e) a.erase(it);
    return a;
}
inline bool contains(const IndexSet& a, int e) { return std::binary_search(a.begin(), a.end(), e); }

// Dense square matrix whose rows and columns carry sorted labels.
template <class F>
class Matrix {
public:
    using Field = F;
    using Elem = typename F::Elem;

    Matrix(const F& f, int n) : Matrix(f, iota_set(n)) {}
    Matrix(const F& f, IndexSet labels)
        : f_(f), labels_(std::move(labels)), n_(static_cast<int>(labels_.size())),
          a_(static_cast<std::size_t>(n_) * n_, f.zero()) {
        if (!std::is_sorted(labels_.begin(), labels_.end()) ||
            std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end())
            throw std::invalid_argument("matrix labels must be sorted and distinct");
    }

    const F& field() const { return f_; }
    int n() const { return n_; }
    const IndexSet& labels() const { return labels_; }

    Elem& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * n_ + c]; }
    const Elem& operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * n_ + c]; }

    int pos(int label) const {
        auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
        if (it == labels_.end() || *it != label) throw std::out_of_range("label not in matrix");
        return static_cast<int>(it - labels_.begin());
    }
    Elem& at(int lr, int lc) { return (*this)(pos(lr), pos(lc)); }
    const Elem& at(int lr, int lc) const { return (*this)(pos(lr), pos(lc)); }

    std::vector<int> positions(const IndexSet& S) const {
        std::vector<int> p;
        p.reserve(S.size());
        for (int s : S) p.push_back(pos(s));
        return p;
    }

    // A[S] keeping labels S.
    Matrix principal(const IndexSet& S) const {
        Matrix out(f_, S);
        auto p = positions(S);
        for (std::size_t r = 0; r < p.size(); ++r)
            for (std::size_t c = 0; c < p.size(); ++c) out(r, c) = (*this)(p[r], p[c]);
        return out;
    }

    // Entries of A[R, C] in row-major order.
    std::vector<Elem> block(const IndexSet& R, const IndexSet& C) const {
        auto pr = positions(R), pc = positions(C);
        std::vector<Elem> out;
        out.reserve(pr.size() * pc.size());
        for (int r : pr)
            for (int c : pc) out.push_back((*this)(r, c));
        return out;
    }

    Matrix transpose() const {
        Matrix t(f_, labels_);
        for (int r = 0; r < n_; ++r)
            for (int c = 0; c < n_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    Matrix relabeled(IndexSet labels) const {
        if (static_cast<int>(labels.size()) != n_) throw std::invalid_argument("relabel size mismatch");
        Matrix out(f_, std::move(labels));
        out.a_ = a_;
        return out;
    }

    bool operator==(const Matrix& o) const { return labels_ == o.labels_ && a_ == o.a_; }

private:
    F f_;
    IndexSet labels_;
    int n_;
    std::vector<Elem> a_;
};

template <class F>
Matrix<F> identity(const F& f, int n) {
    Matrix<F> m(f, n);
    for (int i = 0; i < n; ++i) m(i, i) = f.one();
    return m;
}

template <class F>
Matrix<F> diagonal(const F& f, const std::vector<typename F::Elem>& d, IndexSet labels = {}) {
    if (labels.empty()) labels = iota_set(static_cast<int>(d.size()));
    Matrix<F> m(f, labels);
    for (int i = 0; i < m.n(); ++i) m(i, i) = d[i];
    return m;
}

template <class F>
Matrix<F> add_diag(Matrix<F> a, const std::vector<typename F::Elem>& d) {
    for (int i = 0; i < a.n(); ++i) a(i, i) += d[i];
    return a;
}

template <class F>
Matrix<F> operator+(Matrix<F> a, const Matrix<F>& b) {
    for (int r = 0; r < a.n(); ++r)
        for (int c = 0; c < a.n(); ++c) a(r, c) += b(r, c);
    return a;
}
template <class F>
Matrix<F> operator-(Matrix<F> a, const Matrix<F>& b) {
    for (int r = 0; r < a.n(); ++r)
        for (int c = 0; c < a.n(); ++c) a(r, c) -= b(r, c);
    return a;
}
template <class F>
Matrix<F> operator*(const Matrix<F>& a, const Matrix<F>& b) {
    Matrix<F> out(a.field(), a.labels());
    const int n = a.n();
    for (int r = 0; r < n; ++r)
        for (int k = 0; k < n; ++k) {
            if (a.field().is_zero(a(r, k))) continue;
            for (int c = 0; c < n; ++c) out(r, c) += a(r, k) * b(k, c);
        }
    return out;
}

// Determinant of a k x k row-major array. Inverse pivots over F_p,
// fraction-free Bareiss over the rationals.
template <class F>
typename F::Elem det_raw(const F& f, std::vector<typename F::Elem> m, int k) {
    using E = typename F::Elem;
    if (k == 0) return f.one();
    if (k == 1) return m[0];
    if (k == 2) return m[0] * m[3] - m[1] * m[2];
    if (k == 3)
        return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
    auto at = [&](int r, int c) -> E& { return m[static_cast<std::size_t>(r) * k + c]; };
    bool neg = false;
    if constexpr (F::is_rational) {
        E prev = f.one();
        for (int c = 0; c < k; ++c) {
            int p = c;
            while (p < k && f.is_zero(at(p, c))) ++p;
            if (p == k) return f.zero();
            if (p != c) {
                for (int j = 0; j < k; ++j) std::swap(at(p, j), at(c, j));
                neg = !neg;
            }
            for (int r = c + 1; r < k; ++r) {
                for (int j = c + 1; j < k; ++j) at(r, j) = (at(r, j) * at(c, c) - at(r, c) * at(c, j)) / prev;
                at(r, c) = f.zero();
            }
            prev = at(c, c);
        }
        E d = at(k - 1, k - 1);
        return neg ? E(-d) : d;
    } else {
        E d = f.one();
        for (int c = 0; c < k; ++c) {
            int p = c;
            while (p < k && f.is_zero(at(p, c))) ++p;
            if (p == k) return f.zero();
            if (p != c) {
                for (int j = c; j < k; ++j) std::swap(at(p, j), at(c, j));
                neg = !neg;
            }
            d *= at(c, c);
            E inv = f.inv(at(c, c));
            for (int r = c + 1; r < k; ++r) {
                if (f.is_zero(at(r, c))) continue;
                E factor = at(r, c) * inv;
                for (int j = c + 1; j < k; ++j) at(r, j) -= factor * at(c, j);
            }
        }
        return neg ? -d : d;
    }
}

template <class F>
typename F::Elem det(const Matrix<F>& a) {
    std::vector<typename F::Elem> m;
    m.reserve(static_cast<std::size_t>(a.n()) * a.n());
    for (int r = 0; r < a.n(); ++r)
        for (int c = 0; c < a.n(); ++c) m.push_back(a(r, c));
    return det_raw(a.field(), std::move(m), a.n());
}

// det(A[R, C]) by labels.
template <class F>
typename F::Elem det_block(const Matrix<F>& a, const IndexSet& R, const IndexSet& C) {
    if (R.size() != C.size()) throw std::invalid_argument("det_block needs a square block");
    return det_raw(a.field(), a.block(R, C), static_cast<int>(R.size()));
}

// Principal minor det(A[S]) by labels.
template <class F>
typename F::Elem minor(const Matrix<F>& a, const IndexSet& S) {
    return det_block(a, S, S);
}

template <class F>
int rank_raw(const F& f, std::vector<typename F::Elem> m, int rows, int cols) {
    auto at = [&](int r, int c) -> typename F::Elem& { return m[static_cast<std::size_t>(r) * cols + c]; };
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int p = rank;
        while (p < rows && f.is_zero(at(p, c))) ++p;
        if (p == rows) continue;
        for (int j = 0; j < cols; ++j) std::swap(at(p, j), at(rank, j));
        auto inv = f.inv(at(rank, c));
        for (int r = rank + 1; r < rows; ++r) {
            if (f.is_zero(at(r, c))) continue;
            typename F::Elem factor = at(r, c) * inv;
            for (int j = c; j < cols; ++j) at(r, j) -= factor * at(rank, j);
        }
        ++rank;
    }
    return rank;
}

template <class F>
int rank(const Matrix<F>& a, const IndexSet& R, const IndexSet& C) {
    return rank_raw(a.field(), a.block(R, C), static_cast<int>(R.size()), static_cast<int>(C.size()));
}
template <class F>
int rank(const Matrix<F>& a) {
    return rank(a, a.labels(), a.labels());
}

// rank(A[R, C]) <= 1, without full elimination.
template <class F>
bool rank_at_most_one(const Matrix<F>& a, const IndexSet& R, const IndexSet& C) {
    const F& f = a.field();
    auto pr = a.positions(R), pc = a.positions(C);
    int r0 = -1, c0 = -1;
    for (int r : pr) {
        for (int c : pc)
            if (!f.is_zero(a(r, c))) {
                r0 = r;
                c0 = c;
                break;
            }
        if (r0 >= 0) break;
    }
    if (r0 < 0) return true;
    for (int r : pr)
        for (int c : pc)
            if (a(r, c) * a(r0, c0) != a(r, c0) * a(r0, c)) return false;
    return true;
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& a) {
    const F& f = a.field();
    const int n = a.n();
    Matrix<F> m = a, inv = identity(f, n).relabeled(a.labels());
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (p < n && f.is_zero(m(p, c))) ++p;
        if (p == n) return std::nullopt;
        if (p != c)
            for (int j = 0; j < n; ++j) {
                std::swap(m(p, j), m(c, j));
                std::swap(inv(p, j), inv(c, j));
            }
        auto ip = f.inv(m(c, c));
        for (int j = 0; j < n; ++j) {
            m(c, j) *= ip;
            inv(c, j) *= ip;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || f.is_zero(m(r, c))) continue;
            auto factor = m(r, c);
            for (int j = 0; j < n; ++j) {
                m(r, j) -= factor * m(c, j);
                inv(r, j) -= factor * inv(c, j);
            }
        }
    }
    return inv;
}

// A adj(A) = det(A) I; cofactors when A is singular.
template <class F>
Matrix<F> adjugate(const Matrix<F>& a) {
    const F& f = a.field();
    const int n = a.n();
    if (n == 1) {
        Matrix<F> out(f, a.labels());
        out(0, 0) = f.one();
        return out;
    }
    if (auto inv = inverse(a)) {
        auto d = det(a);
        Matrix<F> out = *inv;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) out(r, c) *= d;
        return out;
    }
    Matrix<F> out(f, a.labels());
    if (rank(a) < n - 1) return out;
    std::vector<typename F::Elem> m;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            m.clear();
            for (int r = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0; c < n; ++c)
                    if (c != j) m.push_back(a(r, c));
            }
            auto d = det_raw(f, m, n - 1);
            out(j, i) = ((i + j) % 2) ? -d : d;
        }
    return out;
}

template <class F>
bool is_dense(const Matrix<F>& a) {
    for (int r = 0; r < a.n(); ++r)
        for (int c = 0; c < a.n(); ++c)
            if (r != c && a.field().is_zero(a(r, c))) return false;
    return true;
}

template <class F>
bool is_cut(const Matrix<F>& a, const IndexSet& X) {
    const int n = a.n();
    if (n < 4 || static_cast<int>(X.size()) < 2 || static_cast<int>(X.size()) > n - 2) return false;
    IndexSet Xb = set_minus(a.labels(), X);
    return rank_at_most_one(a, X, Xb) && rank_at_most_one(a, Xb, X);
}

template <class F>
struct CutTransposeWitness {
    using Elem = typename F::Elem;
    IndexSet X, Xbar;
    std::vector<Elem> p, q, u, v; // A[X,Xbar] = p q^T, A[Xbar,X] = u v^T
};

template <class F>
CutTransposeWitness<F> cut_transpose_witness(const Matrix<F>& a, const IndexSet& X) {
    const F& f = a.field();
    if (!is_cut(a, X)) throw NotACut();
    CutTransposeWitness<F> w;
    w.X = X;
    w.Xbar = set_minus(a.labels(), X);
    const auto& Xb = w.Xbar;
    // q^T: first nonzero row of A[X, Xbar]; p scales it.
    int r0 = -1;
    for (int x : X) {
        for (int y : Xb)
            if (!f.is_zero(a.at(x, y))) {
                r0 = x;
                break;
            }
        if (r0 >= 0) break;
    }
    int c0 = -1;
    for (int x : X) {
        for (int y : Xb)
            if (!f.is_zero(a.at(y, x))) {
                c0 = x;
                break;
            }
        if (c0 >= 0) break;
    }
    if (r0 < 0 || c0 < 0) throw NotACut("off-diagonal block is zero (matrix reducible)");
    int jq = -1;
    for (int y : Xb) {
        w.q.push_back(a.at(r0, y));
        if (jq < 0 && !f.is_zero(a.at(r0, y))) jq = y;
    }
    for (int x : X) w.p.push_back(a.at(x, jq) / a.at(r0, jq));
    int iu = -1;
    for (int y : Xb) {
        w.u.push_back(a.at(y, c0));
        if (iu < 0 && !f.is_zero(a.at(y, c0))) iu = y;
    }
    for (int x : X) w.v.push_back(a.at(iu, x) / a.at(iu, c0));
    return w;
}

// tw(A, X): off-blocks become p u^T and q v^T, A[Xbar] is transposed.
template <class F>
Matrix<F> cut_transpose(const Matrix<F>& a, const IndexSet& X) {
    auto w = cut_transpose_witness(a, X);
    Matrix<F> out = a;
    for (std::size_t i = 0; i < w.X.size(); ++i)
        for (std::size_t j = 0; j < w.Xbar.size(); ++j) {
            out.at(w.X[i], w.Xbar[j]) = w.p[i] * w.u[j];
            out.at(w.Xbar[j], w.X[i]) = w.q[j] * w.v[i];
        }
    for (int y : w.Xbar)
        for (int z : w.Xbar) out.at(y, z) = a.at(z, y);
    return out;
}

// The diagonally similar matrix with ones off the diagonal in row i.
template <class F>
Matrix<F> canonical_diag_similar(const Matrix<F>& a, int i) {
    const F& f = a.field();
    const int pi = a.pos(i);
    std::vector<typename F::Elem> d(a.n(), f.one());
    for (int c = 0; c < a.n(); ++c) {
        if (c == pi) continue;
        if (f.is_zero(a(pi, c))) throw ZeroOffDiagonal();
        d[c] = a(pi, c);
    }
    Matrix<F> out(f, a.labels());
    for (int r = 0; r < a.n(); ++r)
        for (int c = 0; c < a.n(); ++c) out(r, c) = a(r, c) * d[r] / d[c];
    return out;
}

// D^{-1} A D with D = diag(d).
template <class F>
Matrix<F> diag_conjugate(const Matrix<F>& a, const std::vector<typename F::Elem>& d) {
    Matrix<F> out(a.field(), a.labels());
    for (int r = 0; r < a.n(); ++r)
        for (int c = 0; c < a.n(); ++c) out(r, c) = a(r, c) * d[c] / d[r];
    return out;
}

template <class F>
Digraph support_graph(const Matrix<F>& a) {
    Digraph g(a.n());
    for (int r = 0; r < a.n(); ++r)
        for (int c = 0; c < a.n(); ++c)
            if (r != c && !a.field().is_zero(a(r, c))) g.add_edge(r, c);
    return g;
}

// SCCs of the support digraph (labels), ordered so the permuted matrix is
// block upper triangular.
template <class F>
std::vector<IndexSet> scc_partition(const Matrix<F>& a) {
    std::vector<IndexSet> out;
    for (auto& comp : scc_topological(support_graph(a))) {
        IndexSet s;
        for (int v : comp) s.push_back(a.labels()[v]);
        out.push_back(s);
    }
    return out;
}

template <class F>
bool is_irreducible(const Matrix<F>& a) {
    return scc_partition(a).size() == 1;
}

template <class F>
Matrix<F> assemble_blocks(const std::vector<std::pair<IndexSet, Matrix<F>>>& blocks) {
    if (blocks.empty()) throw PartitionMismatch("no blocks");
    IndexSet all;
    std::size_t total = 0;
    for (auto& [S, M] : blocks) {
        if (static_cast<int>(S.size()) != M.n()) throw PartitionMismatch("block size mismatch");
        if (!std::is_sorted(S.begin(), S.end())) throw PartitionMismatch("unsorted index set");
        all = set_union(all, S);
        total += S.size();
    }
    if (all.size() != total) throw PartitionMismatch("index sets overlap");
    Matrix<F> out(blocks.front().second.field(), all);
    for (auto& [S, M] : blocks)
        for (std::size_t r = 0; r < S.size(); ++r)
            for (std::size_t c = 0; c < S.size(); ++c) out.at(S[r], S[c]) = M(r, c);
    return out;
}

} // namespace pmaplab
