#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pmaplab/io.hpp>

#include "support.hpp"

using namespace pmaplab;
using namespace testsupport;

TEST_CASE("matrix json exact text") {
    PrimeField f(7);
    auto a = from_ints(f, {{1, 2}, {3, 4}});
    CHECK(matrix_to_json(a).dump() ==
          R"({"field":{"kind":"prime","modulus":"7"},"n":2,"rows":[["1","2"],["3","4"]]})");
    auto sub = a.relabeled({3, 5});
    CHECK(matrix_to_json(sub).dump() ==
          R"({"field":{"kind":"prime","modulus":"7"},"n":2,"index":[3,5],"rows":[["1","2"],["3","4"]]})");

    RationalField q;
    Matrix<RationalField> r(q, 1);
    r(0, 0) = q.parse("-3/6");
    CHECK(matrix_to_json(r).dump() == R"({"field":{"kind":"rational"},"n":1,"rows":[["-1/2"]]})");
}

TEST_CASE("matrix json round trip") {
    Rng rng(11);
    PrimeField f(choose_prime(6));
    for (int n = 1; n <= 6; ++n) {
        auto a = random_matrix(f, n, rng);
        auto j = matrix_to_json(a);
        auto spec = field_spec_from_json(j["field"]);
        CHECK(spec.is_prime_kind());
        CHECK(spec.modulus == f.modulus());
        auto b = matrix_from_json(f, parse_json_text(j.dump()));
        CHECK(b == a);
        CHECK(matrix_to_json(b).dump() == j.dump());
    }
    RationalField q;
    auto a = matrix_from_json(q, parse_json_text(R"({"field":{"kind":"rational"},"n":2,"rows":[["1/3",2],["-4","0"]]})"));
    CHECK(q.to_string(a(0, 0)) == "1/3");
    CHECK(q.to_string(a(0, 1)) == "2");
}

TEST_CASE("matrix json errors") {
    PrimeField f(7);
    CHECK_THROWS_AS(parse_json_text("{"), FormatError);
    CHECK_THROWS_AS(matrix_from_json(f, parse_json_text(R"({"n":2,"rows":[["1","2"]]})")), FormatError);
    CHECK_THROWS_AS(matrix_from_json(f, parse_json_text(R"({"n":1,"rows":[["x"]]})")), FormatError);
    CHECK_THROWS_AS(matrix_from_json(f, parse_json_text(R"({"n":2,"index":[1,1],"rows":[["1","2"],["3","4"]]})")),
                    FormatError);
    CHECK_THROWS_AS(field_spec_from_json(parse_json_text(R"({"kind":"prime","modulus":"8"})")), InvalidField);
    CHECK_THROWS_AS(field_spec_from_json(parse_json_text(R"({"kind":"real"})")), FormatError);
}

TEST_CASE("rod json round trip") {
    Rng rng(5);
    PrimeField f(choose_prime(5));
    auto inst = gen_rod_instance(f, 4, 3, rng);
    auto j = rod_to_json(inst);
    auto back = rod_from_json(f, parse_json_text(j.dump()));
    CHECK(back.B0 == inst.B0);
    CHECK(back.u == inst.u);
    CHECK(back.v == inst.v);
    CHECK(rod_to_json(back).dump() == j.dump());
    CHECK_THROWS_AS(rod_from_json(f, parse_json_text(R"({"n":1,"r":1,"B0":[["1"]],"rank1":[]})")), FormatError);
}

TEST_CASE("verdict json") {
    PmeVerdict v;
    CHECK(verdict_to_json(v).dump() == R"({"equal":true,"method":"deterministic","samples":0,"witness":null})");
    v.equal = false;
    v.method = PmeMethod::randomized;
    v.samples = 8;
    v.witness = IndexSet{0, 2};
    CHECK(verdict_to_json(v).dump() == R"({"equal":false,"method":"randomized","samples":8,"witness":[0,2]})");
}
