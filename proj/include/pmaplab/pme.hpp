#pragma once

#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "combinat.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "smallrecon.hpp"

namespace pmaplab {

enum class PmeMethod { deterministic, bruteforce, randomized };

inline std::string method_name(PmeMethod m) {
    switch (m) {
    case PmeMethod::deterministic: return "deterministic";
    case PmeMethod::bruteforce: return "bruteforce";
    case PmeMethod::randomized: return "randomized";
    }
    return "?";
}

struct PmeVerdict {
    bool equal = true;
    PmeMethod method = PmeMethod::deterministic;
    int samples = 0;                 // randomized only
    std::optional<IndexSet> witness; // det(A[S]) != det(B[S])
};

namespace detail {

template <class F>
void check_same_shape(const Matrix<F>& a, const Matrix<F>& b) {
    if (a.labels() != b.labels()) throw std::invalid_argument("matrices must carry the same labels");
}

// det of (M + diag(d))[rows, cols], positions; d may be null.
template <class F>
typename F::Elem det_rc(const Matrix<F>& m, const std::vector<typename F::Elem>* d, const std::vector<int>& rows,
                        const std::vector<int>& cols) {
    std::vector<typename F::Elem> e;
    e.reserve(rows.size() * cols.size());
    for (int r : rows)
        for (int c : cols) {
            e.push_back(m(r, c));
            if (d && r == c) e.back() += (*d)[r];
        }
    return det_raw(m.field(), std::move(e), static_cast<int>(rows.size()));
}

inline std::vector<int> all_but(int n, std::initializer_list<int> drop) {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (std::find(drop.begin(), drop.end(), i) == drop.end()) out.push_back(i);
    return out;
}

// Diagonal y * pattern for y = 0, 1, 2, ... until goal holds.
template <class F, class Goal>
std::optional<std::vector<typename F::Elem>> scan_pattern(const F& f, const std::vector<char>& pattern, int limit,
                                                          Goal&& goal) {
    for (int k = 0; k < limit; ++k) {
        if (!f.has_more_than(static_cast<std::uint64_t>(k))) throw FieldTooSmall("diagonal scan ran out of elements");
        typename F::Elem y = f.canonical(static_cast<std::uint64_t>(k));
        std::vector<typename F::Elem> d(pattern.size(), f.zero());
        for (std::size_t i = 0; i < pattern.size(); ++i)
            if (pattern[i]) d[i] = y;
        if (goal(d)) return d;
    }
    return std::nullopt;
}

// Shortest path i -> j in the support digraph, smallest neighbours first.
template <class F>
std::optional<std::vector<int>> shortest_path(const Matrix<F>& m, int i, int j) {
    const int n = m.n();
    std::vector<int> parent(n, -2);
    std::queue<int> q;
    parent[i] = -1;
    q.push(i);
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        if (x == j) break;
        for (int w = 0; w < n; ++w)
            if (w != x && parent[w] == -2 && !m.field().is_zero(m(x, w))) {
                parent[w] = x;
                q.push(w);
            }
    }
    if (parent[j] == -2) return std::nullopt;
    std::vector<int> path;
    for (int y = j; y != -1; y = parent[y]) path.push_back(y);
    std::reverse(path.begin(), path.end());
    return path;
}

// det(M + D) != 0 with D = y I.
template <class F>
std::vector<typename F::Elem> invertible_target(const Matrix<F>& m) {
    const int n = m.n();
    auto rows = all_but(n, {});
    auto d = scan_pattern(m.field(), std::vector<char>(n, 1), n + 1, [&](const std::vector<typename F::Elem>& d) {
        return !m.field().is_zero(det_rc(m, &d, rows, rows));
    });
    if (!d) throw FieldTooSmall("no invertible shift found");
    return *d;
}

// adj(M + D)[i, j] != 0: zero on a shortest i -> j path, y elsewhere.
template <class F>
std::optional<std::vector<typename F::Elem>> adj_entry_target(const Matrix<F>& m, int i, int j) {
    auto path = shortest_path(m, i, j);
    if (!path) return std::nullopt;
    const int n = m.n();
    std::vector<char> pattern(n, 1);
    for (int v : *path) pattern[v] = 0;
    auto rows = all_but(n, {j}), cols = all_but(n, {i});
    return scan_pattern(m.field(), pattern, n + 1, [&](const std::vector<typename F::Elem>& d) {
        return !m.field().is_zero(det_rc(m, &d, rows, cols));
    });
}

// Goals shared by both shifts: M + D invertible, adj(M + D) off-diagonal nonzero.
template <class F>
bool dense_goal(const Matrix<F>& m, const std::vector<typename F::Elem>& d, Matrix<F>* adj_out = nullptr) {
    auto md = add_diag(m, d);
    if (m.field().is_zero(det(md))) return false;
    auto adj = adjugate(md);
    if (!is_dense(adj)) return false;
    if (adj_out) *adj_out = std::move(adj);
    return true;
}

} // namespace detail

// Diagonal D with every goal nonzero, interpolated through the target
// diagonals at the points 0, 1, ..., K-1 and scanned at t = 0, 1, 2, ...
template <class F>
std::vector<typename F::Elem> lagrange_combine_diagonals(
    const F& f, const std::vector<std::vector<typename F::Elem>>& targets,
    const std::vector<std::function<bool(const std::vector<typename F::Elem>&)>>& goals, int degree_bound) {
    using E = typename F::Elem;
    if (targets.empty()) throw std::invalid_argument("lagrange_combine_diagonals needs a target");
    const std::uint64_t K = targets.size();
    const std::uint64_t limit = K * static_cast<std::uint64_t>(std::max(1, degree_bound)) + 1;
    if (!f.has_more_than(K)) throw FieldTooSmall("fewer field elements than targets");
    const std::size_t n = targets.front().size();
    // barycentric weights at the nodes 0..K-1: w_k = 1 / prod_{m != k} (k - m)
    std::vector<E> fact(K, f.one());
    for (std::uint64_t k = 1; k < K; ++k) fact[k] = fact[k - 1] * f.canonical(k);
    std::vector<E> w(K);
    for (std::uint64_t k = 0; k < K; ++k) {
        E den = fact[k] * fact[K - 1 - k];
        if ((K - 1 - k) % 2) den = -den;
        w[k] = f.inv(den);
    }
    auto all_hold = [&](const std::vector<E>& d) {
        for (auto& g : goals)
            if (!g(d)) return false;
        return true;
    };
    for (std::uint64_t s = 0; s < limit; ++s) {
        if (!f.has_more_than(s)) break;
        std::vector<E> d;
        if (s < K) {
            d = targets[s];
        } else {
            E t = f.canonical(s);
            E ell = f.one();
            for (std::uint64_t m = 0; m < K; ++m) ell *= t - f.canonical(m);
            d.assign(n, f.zero());
            for (std::uint64_t k = 0; k < K; ++k) {
                E lk = ell * w[k] / (t - f.canonical(k));
                for (std::size_t i = 0; i < n; ++i) d[i] += targets[k][i] * lk;
            }
        }
        if (all_hold(d)) return d;
    }
    throw FieldTooSmall("scan exhausted " + std::to_string(limit) + " values");
}

// Decides det((M+Y)[Tbar, Sbar]) != 0 for |S| = |T| = 2 and returns a
// diagonal D with det(M+D) != 0 and det((M+D)[Tbar, Sbar]) != 0.
template <class F>
std::optional<std::vector<typename F::Elem>> nonzero_witness_minor(const Matrix<F>& m, const IndexSet& S,
                                                                  const IndexSet& T) {
    using E = typename F::Elem;
    const F& f = m.field();
    const int n = m.n();
    if (S.size() != 2 || T.size() != 2) throw std::invalid_argument("nonzero_witness_minor needs |S| = |T| = 2");
    auto ps = m.positions(S), pt = m.positions(T);
    std::vector<int> rows, cols;
    for (int i = 0; i < n; ++i) {
        if (i != pt[0] && i != pt[1]) rows.push_back(i);
        if (i != ps[0] && i != ps[1]) cols.push_back(i);
    }
    auto all = detail::all_but(n, {});
    auto goal = [&](const std::vector<E>& d) {
        return !f.is_zero(detail::det_rc(m, &d, all, all)) && !f.is_zero(detail::det_rc(m, &d, rows, cols));
    };
    const int limit = 2 * n + 1;
    bool overlap = ps[0] == pt[0] || ps[0] == pt[1] || ps[1] == pt[0] || ps[1] == pt[1];
    if (overlap) return detail::scan_pattern(f, std::vector<char>(n, 1), limit, goal);

    // pivot on a nonzero entry of M[S, T]; the rows of S and columns of T carry no y
    int s1 = -1, s2 = -1, t1 = -1, t2 = -1;
    for (int a = 0; a < 2 && s1 < 0; ++a)
        for (int c = 0; c < 2 && s1 < 0; ++c)
            if (!f.is_zero(m(ps[a], pt[c]))) {
                s1 = ps[a], s2 = ps[1 - a], t1 = pt[c], t2 = pt[1 - c];
            }
    if (s1 < 0) throw std::invalid_argument("nonzero_witness_minor: M[S, T] is zero");
    std::vector<int> rest;
    for (int i = 0; i < n; ++i)
        if (i != ps[0] && i != ps[1] && i != pt[0] && i != pt[1]) rest.push_back(i);
    // reduced matrix: node 0 pairs row s2 with column t2, node k pairs rest[k-1] with itself
    std::vector<int> rnode{s2}, cnode{t2};
    rnode.insert(rnode.end(), rest.begin(), rest.end());
    cnode.insert(cnode.end(), rest.begin(), rest.end());
    const int k = static_cast<int>(rnode.size());
    E piv = f.inv(m(s1, t1));
    Digraph g(k);
    for (int u = 0; u < k; ++u)
        for (int v = 0; v < k; ++v) {
            if (u == v && u != 0) continue;
            E x = m(rnode[u], cnode[v]) - m(rnode[u], t1) * m(s1, cnode[v]) * piv;
            if (!f.is_zero(x)) g.add_edge(u, v);
        }
    auto cyc = shortest_cycle_through(g, 0);
    if (!cyc) return std::nullopt;
    std::vector<char> pattern(n, 0);
    for (int r : rest) pattern[r] = 1;
    for (int u : *cyc)
        if (u != 0) pattern[rnode[u]] = 0;
    auto d = detail::scan_pattern(f, pattern, limit, goal);
    if (!d) throw FieldTooSmall("no value for the witness pattern");
    return d;
}

struct AdjPair {
    IndexSet S, T;
};

// Ordered pairs of disjoint 2-sets with det(adj(M+Y)[S, T]) not identically
// zero, with a witness diagonal for each.
template <class F>
std::vector<std::pair<AdjPair, std::vector<typename F::Elem>>> symbolic_rank2_pairs(const Matrix<F>& m) {
    using E = typename F::Elem;
    const IndexSet& L = m.labels();
    std::vector<AdjPair> pairs;
    for_each_subset_upto(L, 2, [&](const IndexSet& S) {
        if (S.size() != 2) return true;
        for_each_subset_upto(set_minus(L, S), 2, [&](const IndexSet& T) {
            if (T.size() == 2) pairs.push_back({S, T});
            return true;
        });
        return true;
    });
    auto ws = parallel_map<std::optional<std::vector<E>>>(
        pairs.size(), [&](std::size_t i) { return nonzero_witness_minor(m, pairs[i].S, pairs[i].T); });
    std::vector<std::pair<AdjPair, std::vector<E>>> out;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (ws[i]) out.push_back({pairs[i], *ws[i]});
    return out;
}

// D1 with A+D1, B+D1 invertible and both adjugates dense (A, B irreducible).
template <class F>
std::vector<typename F::Elem> dense_adjugate_shift(const Matrix<F>& a, const Matrix<F>& b) {
    using E = typename F::Elem;
    detail::check_same_shape(a, b);
    const int n = a.n();
    std::vector<std::vector<E>> targets;
    for (const Matrix<F>* m : {&a, &b}) {
        targets.push_back(detail::invertible_target(*m));
        std::vector<std::pair<int, int>> ij;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) ij.push_back({i, j});
        auto ds = parallel_map<std::optional<std::vector<E>>>(
            ij.size(), [&](std::size_t k) { return detail::adj_entry_target(*m, ij[k].first, ij[k].second); });
        for (std::size_t k = 0; k < ij.size(); ++k) {
            if (!ds[k])
                throw std::invalid_argument("dense_adjugate_shift: no path " + std::to_string(ij[k].first) + " -> " +
                                            std::to_string(ij[k].second) + " (reducible input)");
            targets.push_back(*ds[k]);
        }
    }
    std::vector<std::function<bool(const std::vector<E>&)>> goals{
        [&](const std::vector<E>& d) { return detail::dense_goal(a, d); },
        [&](const std::vector<E>& d) { return detail::dense_goal(b, d); }};
    return lagrange_combine_diagonals(a.field(), targets, goals, n);
}

// D2 keeping invertibility, density and the rank of every disjoint 2x2 block
// of adj(M+Y) for M in {A1, B1}.
template <class F>
std::vector<typename F::Elem> propR_adjugate_shift(const Matrix<F>& a1, const Matrix<F>& b1) {
    using E = typename F::Elem;
    detail::check_same_shape(a1, b1);
    const int n = a1.n();
    std::vector<std::vector<E>> targets;
    std::vector<std::vector<AdjPair>> kept(2);
    int side = 0;
    for (const Matrix<F>* m : {&a1, &b1}) {
        targets.push_back(detail::invertible_target(*m));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) {
                    auto d = detail::adj_entry_target(*m, i, j);
                    if (!d) throw std::invalid_argument("propR_adjugate_shift: input not dense");
                    targets.push_back(*d);
                }
        for (auto& [p, d] : symbolic_rank2_pairs(*m)) {
            kept[side].push_back(p);
            targets.push_back(d);
        }
        ++side;
    }
    auto goal_for = [&](const Matrix<F>& m, const std::vector<AdjPair>& ps) {
        return [&m, &ps](const std::vector<E>& d) {
            Matrix<F> adj(m.field(), m.labels());
            if (!detail::dense_goal(m, d, &adj)) return false;
            for (auto& p : ps) {
                auto r = adj.positions(p.S), c = adj.positions(p.T);
                if (m.field().is_zero(detail::det_rc(adj, nullptr, r, c))) return false;
            }
            return true;
        };
    };
    std::vector<std::function<bool(const std::vector<E>&)>> goals{goal_for(a1, kept[0]), goal_for(b1, kept[1])};
    return lagrange_combine_diagonals(a1.field(), targets, goals, n);
}

namespace detail {

// From a subset T with det((A+D)[T]) != det((B+D)[T]), peel diagonal entries
// and indices until a genuine principal-minor mismatch of A, B remains.
template <class F>
IndexSet descend_witness(const Matrix<F>& a, const Matrix<F>& b, std::vector<typename F::Elem> d, IndexSet T) {
    const F& f = a.field();
    auto differ = [&](const std::vector<typename F::Elem>& dd, const IndexSet& S) {
        auto p = a.positions(S);
        return det_rc(a, &dd, p, p) != det_rc(b, &dd, p, p);
    };
    if (!differ(d, T)) throw std::logic_error("descend_witness: start set does not differ");
    for (int e : IndexSet(T)) {
        int pe = a.pos(e);
        if (f.is_zero(d[pe])) continue;
        auto d0 = d;
        d0[pe] = f.zero();
        if (differ(d0, T))
            d = std::move(d0);
        else
            T = without_elem(T, e); // the difference is d_e times the one on T - e
    }
    return T;
}

// A mismatch of adj(A+D) vs adj(B+D) on S becomes one of A vs B.
template <class F>
IndexSet witness_from_adj_mismatch(const Matrix<F>& a, const Matrix<F>& b, const std::vector<typename F::Elem>& d,
                                   const IndexSet& S) {
    auto all = a.positions(a.labels());
    if (det_rc(a, &d, all, all) != det_rc(b, &d, all, all)) return descend_witness(a, b, d, a.labels());
    IndexSet Sb = set_minus(a.labels(), S);
    if (Sb.empty()) throw std::logic_error("adjugate determinants agree on the full set");
    return descend_witness(a, b, d, Sb);
}

template <class F>
std::optional<IndexSet> first_mismatch(const Matrix<F>& a, const Matrix<F>& b, int k) {
    std::optional<IndexSet> out;
    for_each_subset_upto(a.labels(), k, [&](const IndexSet& S) {
        if (minor(a, S) != minor(b, S)) {
            out = S;
            return false;
        }
        return true;
    });
    return out;
}

inline bool size_lex_less(const IndexSet& x, const IndexSet& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
}

// One irreducible block pair; returns a witness when they differ.
template <class F>
std::optional<IndexSet> block_mismatch(const Matrix<F>& a, const Matrix<F>& b) {
    if (a.n() <= 3) return first_mismatch(a, b, a.n());
    auto all = a.positions(a.labels());
    auto d1 = dense_adjugate_shift(a, b);
    if (det_rc(a, &d1, all, all) != det_rc(b, &d1, all, all)) return descend_witness(a, b, d1, a.labels());
    auto a1 = adjugate(add_diag(a, d1)), b1 = adjugate(add_diag(b, d1));
    auto d2 = propR_adjugate_shift(a1, b1);
    auto back = [&](const IndexSet& U) { return witness_from_adj_mismatch(a, b, d1, U); };
    if (det_rc(a1, &d2, all, all) != det_rc(b1, &d2, all, all)) return back(descend_witness(a1, b1, d2, a.labels()));
    auto a2 = adjugate(add_diag(a1, d2)), b2 = adjugate(add_diag(b1, d2));
    auto S = first_mismatch(a2, b2, 4);
    if (!S) return std::nullopt;
    return back(witness_from_adj_mismatch(a1, b1, d2, *S));
}

} // namespace detail

// All 2^n - 1 principal minors; witness is the first mismatch in
// size-then-lex order.
template <class F>
PmeVerdict pme_bruteforce(const Matrix<F>& a, const Matrix<F>& b) {
    detail::check_same_shape(a, b);
    if (a.n() > 14) throw TooLarge("pme_bruteforce: n = " + std::to_string(a.n()));
    PmeVerdict v;
    v.method = PmeMethod::bruteforce;
    v.witness = detail::first_mismatch(a, b, a.n());
    v.equal = !v.witness;
    return v;
}

// det(A + diag(r)) = det(B + diag(r)) at k random points.
template <class F>
PmeVerdict pme_randomized(const Matrix<F>& a, const Matrix<F>& b, Rng& rng, int k) {
    detail::check_same_shape(a, b);
    const F& f = a.field();
    PmeVerdict v;
    v.method = PmeMethod::randomized;
    v.samples = k;
    for (int s = 0; s < k && v.equal; ++s) {
        std::vector<typename F::Elem> r(a.n());
        for (auto& x : r) x = f.random(rng);
        v.equal = det(add_diag(a, r)) == det(add_diag(b, r));
    }
    return v;
}

// Deterministic test: matching irreducible blocks, then per block the two
// adjugate shifts and the order <= 4 comparison.
template <class F>
PmeVerdict test_pme(const Matrix<F>& a, const Matrix<F>& b) {
    detail::check_same_shape(a, b);
    const F& f = a.field();
    const std::uint64_t n = a.n();
    if (!f.has_more_than(10 * n * n * n * n * n - 1)) throw FieldTooSmall("test_pme needs |F| >= 10 n^5");
    PmeVerdict v;
    v.method = PmeMethod::deterministic;
    auto pa = scc_partition(a), pb = scc_partition(b);
    auto sorted = [](std::vector<IndexSet> p) {
        std::sort(p.begin(), p.end());
        return p;
    };
    if (sorted(pa) != sorted(pb)) {
        v.equal = false;
        v.witness = detail::first_mismatch(a, b, 2);
        // otherwise fall back to a seeded point where det(A+D) != det(B+D)
        Rng rng(0x9e3779b9);
        for (int k = 0; k < 64 && !v.witness; ++k) {
            std::vector<typename F::Elem> d(n);
            for (auto& x : d) x = f.random(rng);
            auto all = a.positions(a.labels());
            if (detail::det_rc(a, &d, all, all) != detail::det_rc(b, &d, all, all))
                v.witness = detail::descend_witness(a, b, d, a.labels());
        }
        return v;
    }
    auto ws = parallel_map<std::optional<IndexSet>>(
        pa.size(), [&](std::size_t i) { return detail::block_mismatch(a.principal(pa[i]), b.principal(pa[i])); });
    for (auto& w : ws)
        if (w && (!v.witness || detail::size_lex_less(*w, *v.witness))) v.witness = w;
    v.equal = !v.witness;
    return v;
}

} // namespace pmaplab
