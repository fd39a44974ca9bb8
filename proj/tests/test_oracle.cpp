#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pmaplab/oracle.hpp>

#include "support.hpp"

using namespace pmaplab;
using namespace testsupport;

TEST_CASE("box_from_matrix examples") {
    RationalField q;
    auto zero = Matrix<RationalField>(q, 3);
    CHECK(box_from_matrix(zero)({2, 3, 5}) == 30);
    CHECK(box_from_matrix(identity(q, 2))({0, 0}) == 1);
    CHECK(box_from_matrix(from_ints(q, {{1, 2}, {3, 1}}))({1, 1}) == -2);
}

TEST_CASE("pm_query examples and query counts") {
    RationalField q;
    auto box = box_from_matrix(from_ints(q, {{2, 1}, {1, 3}}));
    CHECK(pm_query(box, {0}) == 2);
    CHECK(box.queries() == 2);
    box.reset_queries();
    CHECK(pm_query(box, {0, 1}) == 5);
    CHECK(box.queries() == 1);
    auto ibox = box_from_matrix(identity(q, 5));
    CHECK(pm_query(ibox, {1, 3}) == 1);
}

TEST_CASE("pm_query reproduces every principal minor") {
    Rng rng(41);
    for (int t = 0; t < 100; ++t) {
        int n = 1 + static_cast<int>(rng.below(8));
        PrimeField f(choose_prime(n));
        auto a = random_matrix(f, n, rng, false);
        auto box = box_from_matrix(a);
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            IndexSet S;
            for (int i = 0; i < n; ++i)
                if (mask >> i & 1) S.push_back(i);
            box.reset_queries();
            CHECK(pm_query(box, S) == cofactor_minor(a, S));
            CHECK(box.queries() == n - static_cast<long long>(S.size()) + 1);
        }
    }
}

TEST_CASE("eval_with_inversions") {
    RationalField q;
    // constant polynomial
    PolyBox<RationalField> c(q, 2, 2, [](const std::vector<mpq_class>&) -> mpq_class { return mpq_class(7); });
    CHECK(eval_with_inversions(c, {0, 0}, {true, true}) == 7);
    CHECK(c.queries() == 3);
    // f = z * h(y) + 3, h(y) = y + 2, only defined for z != 0
    PolyBox<RationalField> g(q, 2, 2, [](const std::vector<mpq_class>& p) -> mpq_class {
        if (sgn(p[0]) == 0) throw std::logic_error("queried at an inverted zero");
        return p[0] * (p[1] + 2) + 3;
    });
    CHECK(eval_with_inversions(g, {0, 5}, {true, false}) == 3);
    CHECK(g.queries() == 3);
    g.reset_queries();
    CHECK(eval_with_inversions(g, {2, 5}, {true, false}) == 17);
    CHECK(g.queries() == 1);
    PrimeField tiny(3);
    PolyBox<PrimeField> t(tiny, 1, 2, [&](const std::vector<Fp>&) { return tiny.one(); });
    CHECK_THROWS_AS(eval_with_inversions(t, {tiny.zero()}, {true}), FieldTooSmall);
}

TEST_CASE("shifted_inverse_box agrees with the explicit inverse") {
    Rng rng(43);
    RationalField q;
    auto sb = shifted_inverse_box(box_from_matrix(Matrix<RationalField>(q, 3)), {1, 1, 1});
    CHECK(sb({0, 0, 0}) == 1);
    for (int t = 0; t < 10; ++t) {
        int n = 2 + static_cast<int>(rng.below(5));
        PrimeField f(choose_prime(n));
        auto a = random_matrix(f, n, rng, false);
        std::vector<Fp> D(n);
        for (auto& d : D) d = f.random(rng);
        auto ad = add_diag(a, D);
        if (f.is_zero(det(ad))) continue;
        auto cinv = *inverse(ad);
        auto sib = shifted_inverse_box(box_from_matrix(a), D);
        auto direct = box_from_matrix(cinv);
        for (int k = 0; k < 100; ++k) {
            std::vector<Fp> y(n);
            for (auto& v : y) v = (k % 4 == 0) ? f.zero() : f.random(rng);
            CHECK(sib(y) == direct(y));
        }
        CHECK(sib(std::vector<Fp>(n, f.zero())) == f.inv(det(ad)));
        // minor oracles through the literal and the Jacobi route
        auto lit = pm_shifted_inverse_literal(box_from_matrix(a), D);
        auto fast = pm_shifted_inverse_fast(box_from_matrix(a), D);
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            IndexSet S;
            for (int i = 0; i < n; ++i)
                if (mask >> i & 1) S.push_back(i);
            auto m = minor(cinv, S);
            CHECK(lit(S) == m);
            CHECK(fast(S) == m);
        }
    }
    PrimeField f(11);
    auto sing = box_from_matrix(from_ints(f, {{1, 1}, {1, 1}}));
    CHECK_THROWS_AS(shifted_inverse_box(sing, {f.zero(), f.zero()}), SingularShift);
}

TEST_CASE("fast minor oracle query cost") {
    PrimeField f(choose_prime(6));
    Rng rng(2);
    auto a = random_matrix(f, 6, rng);
    auto box = box_from_matrix(a);
    std::vector<Fp> D(6);
    for (auto& d : D) d = f.random(rng);
    auto pm = pm_shifted_inverse_fast(box, D);
    box.reset_queries();
    pm({1, 4});
    CHECK(box.queries() == 3);
}

TEST_CASE("pair product and triple sum") {
    RationalField q;
    auto pm = pm_from_matrix(from_ints(q, {{1, 2}, {3, 1}}));
    CHECK(pm_pair_product(pm, 0, 1) == 6);
    CHECK(pm.queries() == 3);
    auto dg = pm_from_matrix(from_ints(q, {{1, 0, 0}, {0, 2, 0}, {0, 0, 3}}));
    CHECK(pm_pair_product(dg, 0, 2) == 0);
    CHECK(pm_triple_sum(dg, 0, 1, 2) == 0);
    auto jm = pm_from_matrix(from_ints(q, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
    jm.counter->store(0);
    CHECK(pm_triple_sum(jm, 0, 1, 2) == 2);
    CHECK(jm.queries() == 7);
    Rng rng(3);
    PrimeField f(10007);
    for (int t = 0; t < 50; ++t) {
        auto a = random_matrix(f, 3, rng, false);
        auto p = pm_from_matrix(a);
        CHECK(pm_triple_sum(p, 0, 1, 2) == a(0, 1) * a(1, 2) * a(2, 0) + a(0, 2) * a(2, 1) * a(1, 0));
        CHECK(pm_pair_product(p, 1, 2) == a(1, 2) * a(2, 1));
    }
}

TEST_CASE("2x2 irreducibility") {
    RationalField q;
    auto r = from_ints(q, {{0, 1}, {0, 0}});
    CHECK_FALSE(check_2x2_irreducible(pm_from_matrix(r), 0, 1));
    CHECK_FALSE(check_2x2_irreducible(box_from_matrix(r), 0, 1));
    CHECK(check_2x2_irreducible(pm_from_matrix(from_ints(q, {{0, 1}, {1, 0}})), 0, 1));
    CHECK(check_2x2_irreducible(box_from_matrix(from_ints(q, {{1, 2}, {3, 1}})), 0, 1));
    // exhaustive over F_5, 2x2 embedded in a 3x3
    PrimeField f(5);
    for (int mask = 0; mask < 625; ++mask) {
        Matrix<PrimeField> a(f, 3);
        a(0, 0) = f.canonical(mask % 5);
        a(0, 1) = f.canonical(mask / 5 % 5);
        a(1, 0) = f.canonical(mask / 25 % 5);
        a(1, 1) = f.canonical(mask / 125 % 5);
        a(2, 2) = f.one();
        a(0, 2) = f.from_int(2);
        bool expect = !f.is_zero(a(0, 1) * a(1, 0));
        CHECK(check_2x2_irreducible(pm_from_matrix(a), 0, 1) == expect);
        CHECK(check_2x2_irreducible(box_from_matrix(a), 0, 1) == expect);
    }
}

TEST_CASE("cached oracle hits the inner oracle once per subset") {
    PrimeField f(choose_prime(5));
    Rng rng(1);
    auto inner = pm_from_matrix(random_matrix(f, 5, rng));
    auto c = cached(inner);
    c({0, 1});
    c({0, 1});
    c({0, 1, 2, 3, 4});
    c({0, 1, 2, 3, 4});
    CHECK(inner.queries() == 2);
    CHECK(c.queries() == 4);
}

TEST_CASE("interpolation recovers coefficients") {
    PrimeField f(10007);
    std::vector<Fp> xs, ys;
    for (int i = 1; i <= 4; ++i) {
        auto x = f.canonical(i);
        xs.push_back(x);
        ys.push_back(f.from_int(3) + f.from_int(5) * x * x * x);
    }
    auto c = interpolate(f, xs, ys);
    CHECK(c[0].v == 3);
    CHECK(c[1].v == 0);
    CHECK(c[2].v == 0);
    CHECK(c[3].v == 5);
}
