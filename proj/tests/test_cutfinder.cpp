#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pmaplab/cutfinder.hpp>
#include <pmaplab/gen.hpp>

#include "support.hpp"

using namespace pmaplab;
using namespace testsupport;

namespace {

// Every {a,b} in S against every {c,d} outside passes P.
template <class F>
bool plausible_exhaustive(const SubmatrixFamily<F>& fam, const IndexSet& J, const IndexSet& S) {
    IndexSet Sb = set_minus(J, S);
    for (int a : S)
        for (int b : S)
            for (int c : Sb)
                for (int d : Sb)
                    if (a != b && c != d && !fam.satisfies_P(a, b, c, d)) return false;
    return true;
}

template <class F>
Matrix<F> planted_instance(const F& f, Rng& rng, int n) {
    if (n >= 6 && rng.coin()) return gen_planted_cut(f, n, {2, n - 3}, rng);
    return gen_planted_cut(f, n, {2 + static_cast<int>(rng.below(n - 3))}, rng);
}

} // namespace

TEST_CASE("dense random has no plausible set") {
    Rng rng(1);
    for (int t = 0; t < 20; ++t) {
        int n = 4 + static_cast<int>(rng.below(6));
        PrimeField f(choose_prime(n));
        auto a = gen_random_dense(f, n, rng);
        auto fam = submatrix_family(pm_from_matrix(a), iota_set(n));
        CHECK(fam.positive.empty());
        CHECK(!find_plausible_set(fam));
        CHECK(!minimal_plausible_set(fam.I, fam));
        CHECK(!find_cut_explicit(a));
        CHECK(!has_cut_bruteforce(a));
    }
}

TEST_CASE("size four with a cut") {
    Rng rng(2);
    PrimeField f(choose_prime(4));
    std::vector<IndexSet> cuts;
    auto a = gen_planted_cut(f, 4, {2}, rng, &cuts);
    auto fam = submatrix_family(pm_from_matrix(a), iota_set(4));
    auto ps = find_plausible_set(fam);
    REQUIRE(ps);
    CHECK(ps->S.size() == 2);
    CHECK(ps->free.empty());
    auto ex = find_cut_explicit(a);
    REQUIRE(ex);
    CHECK(is_cut(a, *ex));
}

TEST_CASE("soundness and completeness on planted cuts") {
    Rng rng(77);
    for (int t = 0; t < 200; ++t) {
        int n = 4 + static_cast<int>(rng.below(9));
        PrimeField f(choose_prime(n));
        auto a = planted_instance(f, rng, n);
        auto fam = submatrix_family(pm_from_matrix(a), iota_set(n));
        auto ps = find_plausible_set(fam);
        auto brute = has_cut_bruteforce(a);
        REQUIRE(brute);
        REQUIRE(ps);
        CHECK(ps->S.size() >= 2);
        CHECK(ps->S.size() <= static_cast<std::size_t>(n - 2));
        CHECK(plausible_exhaustive(fam, fam.I, ps->S));
        auto mp = minimal_plausible_set(fam.I, fam);
        REQUIRE(mp);
        CHECK(mp->S.size() <= ps->S.size());
        CHECK(plausible_exhaustive(fam, fam.I, mp->S));
        auto ex = find_cut_explicit(a);
        REQUIRE(ex);
        CHECK(is_cut(a, *ex));
    }
}

TEST_CASE("nested cuts: minimal set is no larger than the found set") {
    Rng rng(78);
    for (int t = 0; t < 30; ++t) {
        int n = 8 + static_cast<int>(rng.below(4));
        PrimeField f(choose_prime(n));
        std::vector<IndexSet> cuts;
        auto a = gen_planted_cut(f, n, {3, 5}, rng, &cuts);
        for (auto& X : cuts) CHECK(is_cut(a, X));
        auto fam = submatrix_family(pm_from_matrix(a), iota_set(n));
        auto ps = find_plausible_set(fam);
        auto mp = minimal_plausible_set(fam.I, fam);
        REQUIRE(ps);
        REQUIRE(mp);
        CHECK(mp->S.size() <= ps->S.size());
        CHECK(mp->quad == ps->quad);
        CHECK(std::includes(ps->S.begin(), ps->S.end(), mp->S.begin(), mp->S.end()));
        // no single flip of a free True variable keeps phi satisfiable
        for (std::size_t v = 0; v < mp->free.size(); ++v) {
            if (!mp->assignment[v]) continue;
            auto y = mp->assignment;
            y[v] = false;
            CHECK(!satisfies(mp->phi, y));
        }
    }
}

TEST_CASE("transitivity of P on planted instances") {
    Rng rng(79);
    for (int t = 0; t < 30; ++t) {
        int n = 6 + static_cast<int>(rng.below(4));
        PrimeField f(choose_prime(n));
        auto a = planted_instance(f, rng, n);
        auto fam = submatrix_family(pm_from_matrix(a), iota_set(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l1 = 0; l1 < n; ++l1)
                        for (int l2 = 0; l2 < n; ++l2) {
                            IndexSet s{i, j, k, l1, l2};
                            std::sort(s.begin(), s.end());
                            if (std::adjacent_find(s.begin(), s.end()) != s.end()) continue;
                            if (fam.satisfies_P(i, j, k, l1) && fam.satisfies_P(i, j, k, l2))
                                CHECK(fam.satisfies_P(i, j, l1, l2));
                        }
    }
}

TEST_CASE("has_cut_bruteforce edge cases") {
    RationalField q;
    CHECK(!has_cut_bruteforce(from_ints(q, {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}})));
    // identity-coupled 2x2 blocks
    auto a = from_ints(q, {{1, 2, 1, 1}, {3, 1, 1, 1}, {1, 1, 1, 5}, {1, 1, 7, 1}});
    auto c = has_cut_bruteforce(a);
    REQUIRE(c);
    CHECK(*c == IndexSet{0, 1});
    CHECK_THROWS_AS(has_cut_bruteforce(Matrix<RationalField>(q, 17)), TooLarge);
}
