#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "oracle.hpp"
#include "parallel.hpp"
#include "reconstructor.hpp"
#include "rng.hpp"

namespace pmaplab {

namespace detail {

template <class Irreducible>
std::vector<IndexSet> group_blocks(int n, Irreducible&& irr) {
    std::vector<char> taken(n, 0);
    std::vector<IndexSet> blocks;
    for (int i = 0; i < n; ++i) {
        if (taken[i]) continue;
        taken[i] = 1;
        IndexSet T{i};
        for (int j = 0; j < n; ++j)
            if (!taken[j] && irr(i, j)) {
                taken[j] = 1;
                T.push_back(j);
            }
        std::sort(T.begin(), T.end());
        blocks.push_back(std::move(T));
    }
    for (const auto& T : blocks)
        for (std::size_t a = 0; a < T.size(); ++a)
            for (std::size_t b = a + 1; b < T.size(); ++b)
                if (!irr(T[a], T[b]))
                    throw TransitivityViolation("{" + std::to_string(T[a]) + "," + std::to_string(T[b]) + "}");
    return blocks;
}

} // namespace detail

// Greedy grouping by 2x2 irreducibility, then the pairwise audit.
template <class F>
std::vector<IndexSet> find_irreducible_blocks(const PolyBox<F>& box, int n) {
    return detail::group_blocks(n, [&](int i, int j) { return check_2x2_irreducible(box, i, j); });
}

template <class F>
std::vector<IndexSet> find_irreducible_blocks(const PMOracle<F>& pm, int n) {
    return detail::group_blocks(n, [&](int i, int j) { return check_2x2_irreducible(pm, i, j); });
}

// C^{-1} - D with C assembled from per-block matrices.
template <class F>
Matrix<F> recombine(const std::vector<IndexSet>& blocks, const std::vector<Matrix<F>>& Cs,
                    const std::vector<typename F::Elem>& D) {
    std::vector<std::pair<IndexSet, Matrix<F>>> parts;
    for (std::size_t b = 0; b < blocks.size(); ++b) parts.push_back({blocks[b], Cs[b].relabeled(blocks[b])});
    auto C = assemble_blocks(parts);
    auto inv = inverse(C);
    if (!inv) throw SingularAssembly();
    Matrix<F> out = *inv;
    for (int i = 0; i < out.n(); ++i) out(i, i) -= D[i];
    return out;
}

struct PmapStats {
    int retries = 0;
    long long box_queries = 0;
    long long minor_queries = 0;
    long long combines = 0;
    long long no_cut_calls = 0;
    std::size_t blocks = 0;
    std::vector<std::string> failures; // one per rejected attempt
    double t_blocks = 0, t_reconstruct = 0, t_verify = 0;
};

struct PmapOptions {
    int max_retries = 8;
    int check_points = 8;
};

// Black-box PMAP: shift, invert through the box, split into irreducible
// blocks, reconstruct each block, undo the shift, verify; resample the
// shift on any failure.
template <class F>
Matrix<F> solve_blackbox_pmap(const PolyBox<F>& box, int n, const Rng& rng, PmapStats* stats = nullptr,
                              PmapOptions opt = {}) {
    using E = typename F::Elem;
    using clock = std::chrono::steady_clock;
    const F& f = box.field;
    auto secs = [](clock::time_point a) { return std::chrono::duration<double>(clock::now() - a).count(); };
    PmapStats local;
    PmapStats& st = stats ? *stats : local;
    const long long q0 = box.queries();
    int singular = 0;
    for (int attempt = 0; attempt < opt.max_retries; ++attempt) {
        st.retries = attempt;
        Rng sh = rng.stream("shift", attempt);
        std::vector<E> D(n);
        for (auto& d : D) d = f.random(sh);
        try {
            auto pm = cached(pm_shifted_inverse_fast(box, D));
            auto t0 = clock::now();
            auto blocks = find_irreducible_blocks(pm, n);
            st.t_blocks += secs(t0);

            t0 = clock::now();
            std::vector<ReconStats> rs(blocks.size());
            auto Cs = parallel_map<std::optional<Matrix<F>>>(blocks.size(), [&](std::size_t b) {
                return std::optional<Matrix<F>>(reconstruct_prop_R(pm, blocks[b], &rs[b]).relabeled(iota_set(blocks[b].size())));
            });
            st.t_reconstruct += secs(t0);

            t0 = clock::now();
            std::vector<Matrix<F>> Cv;
            for (auto& c : Cs) Cv.push_back(*c);
            auto B = recombine(blocks, Cv, D);
            // order <= 4 minors of the assembled C against the oracle
            std::vector<std::pair<IndexSet, Matrix<F>>> parts;
            for (std::size_t b = 0; b < blocks.size(); ++b) parts.push_back({blocks[b], Cv[b].relabeled(blocks[b])});
            auto C = assemble_blocks(parts);
            if (!pme_upto4(pm, C)) throw NoCandidateAccepted("order <= 4 check on the assembled inverse");
            Rng chk = rng.stream("check", attempt);
            for (int k = 0; k < opt.check_points; ++k) {
                std::vector<E> y(n);
                for (auto& v : y) v = f.random(chk);
                if (det(add_diag(B, y)) != box(y)) throw NoCandidateAccepted("random-point agreement");
            }
            st.t_verify += secs(t0);

            st.blocks = blocks.size();
            st.combines = st.no_cut_calls = 0;
            for (auto& r : rs) {
                st.combines += r.combines;
                st.no_cut_calls += r.no_cut_calls;
            }
            st.minor_queries = pm.queries();
            st.box_queries = box.queries() - q0;
            return B;
        } catch (const SingularShift&) {
            ++singular;
            st.failures.push_back("singular shift");
        } catch (const Error& e) {
            st.failures.push_back(e.what());
        } catch (const std::domain_error& e) {
            st.failures.push_back(e.what());
        }
    }
    st.retries = opt.max_retries;
    st.box_queries = box.queries() - q0;
    if (singular == opt.max_retries) throw SingularAlways();
    throw RetriesExhausted("after " + std::to_string(opt.max_retries) + " shifts");
}

} // namespace pmaplab
