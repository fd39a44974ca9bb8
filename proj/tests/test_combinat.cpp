#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pmaplab/combinat.hpp>
#include <pmaplab/rng.hpp>

using namespace pmaplab;

TEST_CASE("two_sat examples") {
    TwoSat a(1);
    a.add_unit({0, true});
    a.add_unit({0, false});
    CHECK_FALSE(two_sat_solve(a).has_value());
    TwoSat b(3);
    auto x = two_sat_solve(b);
    REQUIRE(x.has_value());
    CHECK(satisfies(b, *x));
    TwoSat c(2);
    c.add({0, true}, {1, false});
    c.add_unit({1, true});
    auto y = two_sat_solve(c);
    REQUIRE(y.has_value());
    CHECK((*y)[0]);
    CHECK((*y)[1]);
}

TEST_CASE("two_sat agrees with exhaustive search") {
    Rng rng(31);
    for (int t = 0; t < 500; ++t) {
        int m = 1 + static_cast<int>(rng.below(18));
        TwoSat phi(m);
        int k = static_cast<int>(rng.below(2 * m + 2));
        for (int i = 0; i < k; ++i)
            phi.add({static_cast<int>(rng.below(m)), rng.coin()}, {static_cast<int>(rng.below(m)), rng.coin()});
        bool any = false;
        for (std::uint32_t mask = 0; mask < (1u << m) && !any; ++mask) {
            std::vector<bool> x(m);
            for (int v = 0; v < m; ++v) x[v] = mask >> v & 1;
            any = satisfies(phi, x);
        }
        auto sol = two_sat_solve(phi);
        CHECK(sol.has_value() == any);
        if (sol) CHECK(satisfies(phi, *sol));
    }
}

TEST_CASE("minimal_true_assignment") {
    TwoSat empty(3);
    CHECK(minimal_true_assignment(empty, {true, true, true}) == std::vector<bool>{false, false, false});
    TwoSat force(2);
    force.add_unit({1, true});
    auto x = minimal_true_assignment(force, {true, true});
    CHECK(x == std::vector<bool>{false, true});
    CHECK(minimal_true_assignment(force, x) == x);
    CHECK_THROWS_AS(minimal_true_assignment(force, {true, false}), SeedNotSatisfying);

    // no True variable can be dropped while keeping the False ones
    Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        int m = 1 + static_cast<int>(rng.below(10));
        TwoSat phi(m);
        for (int i = 0; i < m; ++i)
            phi.add({static_cast<int>(rng.below(m)), rng.coin()}, {static_cast<int>(rng.below(m)), rng.coin()});
        std::vector<bool> all(m, true);
        if (!satisfies(phi, all)) continue;
        auto mn = minimal_true_assignment(phi, all);
        REQUIRE(satisfies(phi, mn));
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            std::vector<bool> y(m);
            bool subset = true, proper = false;
            for (int v = 0; v < m; ++v) {
                y[v] = mask >> v & 1;
                if (y[v] && !mn[v]) subset = false;
                if (!y[v] && mn[v]) proper = true;
            }
            if (subset && proper) CHECK_FALSE(satisfies(phi, y));
        }
    }
}

TEST_CASE("shortest_cycle_through") {
    Digraph self(2);
    self.add_edge(0, 0);
    CHECK(*shortest_cycle_through(self, 0) == std::vector<int>{0});
    Digraph tri(3);
    tri.add_edge(0, 1);
    tri.add_edge(1, 2);
    tri.add_edge(2, 0);
    CHECK(shortest_cycle_through(tri, 0)->size() == 3);
    Digraph dag(3);
    dag.add_edge(0, 1);
    dag.add_edge(1, 2);
    CHECK_FALSE(shortest_cycle_through(dag, 0).has_value());
}

// length of the shortest cycle through v by enumerating simple paths
static int brute_cycle(const Digraph& g, int v) {
    int best = 1 << 30;
    std::vector<char> used(g.n, 0);
    auto dfs = [&](auto&& self, int x, int len) -> void {
        for (int w : g.adj[x]) {
            if (w == v) best = std::min(best, len);
            else if (!used[w]) {
                used[w] = 1;
                self(self, w, len + 1);
                used[w] = 0;
            }
        }
    };
    used[v] = 1;
    dfs(dfs, v, 1);
    return best;
}

TEST_CASE("shortest cycles are simple and minimal") {
    Rng rng(13);
    for (int t = 0; t < 300; ++t) {
        int n = 1 + static_cast<int>(rng.below(10));
        Digraph g(n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (rng.below(4) == 0) g.add_edge(a, b);
        int v = static_cast<int>(rng.below(n));
        auto cyc = shortest_cycle_through(g, v);
        int bc = brute_cycle(g, v);
        CHECK(cyc.has_value() == (bc < (1 << 30)));
        if (!cyc) continue;
        CHECK(static_cast<int>(cyc->size()) == bc);
        CHECK(cyc->front() == v);
        std::vector<int> s = *cyc;
        std::sort(s.begin(), s.end());
        CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
        for (std::size_t i = 0; i < cyc->size(); ++i) {
            int a = (*cyc)[i], b = (*cyc)[(i + 1) % cyc->size()];
            CHECK(std::find(g.adj[a].begin(), g.adj[a].end(), b) != g.adj[a].end());
        }
    }
}
