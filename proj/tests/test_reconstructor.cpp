#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pmaplab/gen.hpp>
#include <pmaplab/reconstructor.hpp>

#include "support.hpp"

using namespace pmaplab;
using namespace testsupport;

namespace {

// Oracle that records the largest subset it was asked about.
template <class F>
PMOracle<F> watched(const Matrix<F>& a, std::shared_ptr<std::size_t> largest) {
    return PMOracle<F>(a.field(), a.labels(), [a, largest](const IndexSet& S) -> typename F::Elem {
        *largest = std::max(*largest, S.size());
        return minor(a, S);
    });
}

} // namespace

TEST_CASE("no_cut_sequence small cases") {
    Rng rng(1);
    PrimeField f(choose_prime(4));
    auto a = gen_random_dense(f, 4, rng);
    auto fam = submatrix_family(pm_from_matrix(a), iota_set(4));
    auto seq = no_cut_sequence(iota_set(4), fam, 0, 1);
    CHECK(seq.seq == std::vector<int>{2, 3});
}

TEST_CASE("no_cut_sequence prefixes are cut-free") {
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        int n = 5 + static_cast<int>(rng.below(8));
        PrimeField f(choose_prime(n));
        auto a = gen_random_dense(f, n, rng);
        auto fam = submatrix_family(pm_from_matrix(a), iota_set(n));
        auto seq = no_cut_sequence(iota_set(n), fam, 0, 1);
        REQUIRE(seq.seq.size() == static_cast<std::size_t>(n - 2));
        IndexSet seen{0, 1};
        for (auto it = seq.seq.rbegin(); it != seq.seq.rend(); ++it) {
            seen = with_elem(seen, *it);
            if (seen.size() >= 4) CHECK(!has_cut_bruteforce(a.principal(seen)));
        }
    }
}

TEST_CASE("no_cut_sequence on a matrix with a cut") {
    Rng rng(3);
    PrimeField f(choose_prime(6));
    std::vector<IndexSet> cuts;
    auto a = gen_planted_cut(f, 6, {3}, rng, &cuts);
    auto fam = submatrix_family(pm_from_matrix(a), iota_set(6));
    // with a 3|3 cut every single deletion still leaves a cut
    CHECK_THROWS_AS(no_cut_sequence(iota_set(6), fam, 0, 1), NoRemovableIndex);
}

TEST_CASE("reconstruct_no_cut on dense random matrices") {
    Rng rng(4);
    for (int t = 0; t < 40; ++t) {
        int n = 4 + static_cast<int>(rng.below(7));
        PrimeField f(choose_prime(n));
        auto a = gen_random_dense(f, n, rng);
        auto pm = pm_from_matrix(a);
        auto fam = submatrix_family(pm, iota_set(n), true);
        auto b = reconstruct_no_cut(iota_set(n), fam, pm);
        CHECK(brute_pme(a, b));
        for (int c = 1; c < n; ++c) CHECK(b(0, c) == f.one());
        if (n == 4) {
            bool member = false;
            for (auto& m : fam.families[0].members) member = member || m == b;
            CHECK(member);
        }
    }
}

TEST_CASE("reconstruct_no_cut on symmetric matrices") {
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        PrimeField f(choose_prime(7));
        auto a = gen_random_dense(f, 7, rng);
        for (int r = 0; r < 7; ++r)
            for (int c = 0; c < r; ++c) a(r, c) = a(c, r);
        auto pm = pm_from_matrix(a);
        auto b = reconstruct_no_cut(iota_set(7), submatrix_family(pm, iota_set(7)), pm);
        CHECK(brute_pme(a, b));
        auto ca = canonical_diag_similar(a, 0), cat = canonical_diag_similar(a.transpose(), 0);
        CHECK((b == ca || b == cat));
    }
}

TEST_CASE("combine_across_cut") {
    Rng rng(6);
    for (int t = 0; t < 40; ++t) {
        int n = 4 + static_cast<int>(rng.below(7));
        PrimeField f(choose_prime(n));
        std::vector<IndexSet> cuts;
        auto a = gen_planted_cut(f, n, {2 + static_cast<int>(rng.below(n - 3))}, rng, &cuts);
        const IndexSet& S = cuts[0];
        IndexSet Sb = set_minus(a.labels(), S);
        int s = S[rng.below(S.size())], t2 = Sb[rng.below(Sb.size())];
        auto M = a.principal(with_elem(S, t2));
        auto N = a.principal(with_elem(Sb, s));
        CHECK(brute_pme(a, combine_across_cut(M, N, S, s, t2)));
        // N replaced by a diagonal conjugate
        std::vector<PrimeField::Elem> d(N.n());
        for (auto& x : d) x = random_nonzero(f, rng);
        auto out = combine_across_cut(M, diag_conjugate(N, d), S, s, t2);
        CHECK(brute_pme(a, out));
        CHECK(is_cut(out, S));
    }
    // 4x4 closed form
    RationalField q;
    auto a = from_ints(q, {{1, 2, 2, 4}, {3, 1, 3, 6}, {1, 1, 1, 5}, {2, 2, 7, 1}});
    REQUIRE(is_cut(a, {0, 1}));
    auto out = combine_across_cut(a.principal({0, 1, 2}), a.principal({0, 2, 3}), {0, 1}, 0, 2);
    CHECK(out == a);
}

TEST_CASE("reconstruct_prop_R end to end") {
    Rng rng(7);
    ReconStats total;
    for (int t = 0; t < 200; ++t) {
        int n = 2 + static_cast<int>(rng.below(11));
        PrimeField f(choose_prime(n));
        Matrix<PrimeField> a = (n >= 4 && t % 2) ? gen_planted_cut(f, n, {2 + static_cast<int>(rng.below(n - 3))}, rng)
                                                 : gen_random_dense(f, n, rng);
        auto largest = std::make_shared<std::size_t>(0);
        ReconStats st;
        auto b = reconstruct_prop_R(watched(a, largest), iota_set(n), &st);
        CHECK(brute_pme(a, b));
        CHECK(*largest <= 4);
        if (n >= 4 && t % 2) CHECK(st.combines >= 1);
        if (verify_property_R(a)) CHECK(pme_upto4(a, b));
        total.combines += st.combines;
    }
    CHECK(total.combines > 0);
}

TEST_CASE("reconstruct_prop_R small sizes and relabeled blocks") {
    RationalField q;
    auto a = from_ints(q, {{1, 2}, {3, 1}});
    CHECK(reconstruct_prop_R(pm_from_matrix(a), {0, 1}) == recon2(pm_from_matrix(a), 0, 1));
    Rng rng(8);
    PrimeField f(choose_prime(9));
    auto big = gen_random_dense(f, 9, rng);
    IndexSet T{1, 4, 5, 7, 8};
    auto b = reconstruct_prop_R(pm_from_matrix(big), T);
    CHECK(b.labels() == T);
    CHECK(brute_pme(big.principal(T), b));
}

TEST_CASE("planted two-block cut recurses once") {
    Rng rng(9);
    PrimeField f(choose_prime(10));
    auto a = gen_planted_cut(f, 10, {5}, rng);
    ReconStats st;
    auto b = reconstruct_prop_R(pm_from_matrix(a), iota_set(10), &st);
    CHECK(brute_pme(a, b));
    CHECK(st.combines == 1);
    CHECK(st.max_depth == 1);
}

TEST_CASE("verify_property_R") {
    Rng rng(10);
    for (int t = 0; t < 20; ++t) {
        int n = 4 + static_cast<int>(rng.below(5));
        PrimeField f(choose_prime(n));
        CHECK(verify_property_R(gen_random_dense(f, n, rng)));
        CHECK(verify_property_R(gen_planted_cut(f, n, {2}, rng)));
    }
    RationalField q;
    CHECK(!verify_property_R(from_ints(q, {{1, 0, 1}, {1, 1, 1}, {1, 1, 1}})));
    // rank-one 2x2 block with no extension
    auto a = from_ints(q, {{0, 1, 1, 1, 2}, {1, 0, 1, 1, 3}, {1, 1, 0, 5, 7}, {1, 1, 2, 0, 11}, {3, 5, 2, 13, 0}});
    CHECK(!verify_property_R(a));
}
