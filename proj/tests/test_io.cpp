#include <catch_amalgamated.hpp>

#include <sstream>
#include <string>

#include "boxlasso/io.hpp"

#include "oracles.hpp"

using namespace boxlasso;
using Catch::Matchers::ContainsSubstring;

namespace {

std::string kGood = R"({"m":2,"n":2,"A":[1,0,0,1],"b":[3,0.5],"tau":[1,1]})";

} // namespace

TEST_CASE("problem JSON parses") {
    const Problem p = parse_problem(kGood);
    CHECK(p.m() == 2);
    CHECK(p.n() == 2);
    CHECK(p.a(0, 0) == 1.0);
    CHECK(p.b == Vector{3.0, 0.5});
    CHECK(p.tau == Vector{1.0, 1.0});
}

TEST_CASE("problem JSON errors name the field") {
    CHECK_THROWS_MATCHES(parse_problem("not json"), InvalidInput,
                         Catch::Matchers::MessageMatches(ContainsSubstring("parse error")));
    CHECK_THROWS_MATCHES(parse_problem(R"({"m":2,"n":2,"b":[0,0],"tau":[1,1]})"), InvalidInput,
                         Catch::Matchers::MessageMatches(ContainsSubstring("\"A\"")));
    CHECK_THROWS_MATCHES(parse_problem(R"({"m":2,"n":2,"A":[1,0,0,1],"b":[0],"tau":[1,1]})"),
                         InvalidInput,
                         Catch::Matchers::MessageMatches(ContainsSubstring("\"b\"")));
    CHECK_THROWS_MATCHES(parse_problem(R"({"m":2,"n":2,"A":[1,0,0,1],"b":[0,0],"tau":[1,-1]})"),
                         InvalidInput,
                         Catch::Matchers::MessageMatches(ContainsSubstring("\"tau\"")));
    CHECK_THROWS_MATCHES(
        parse_problem(R"({"m":2,"n":2,"A":[1,0,0,"x"],"b":[0,0],"tau":[1,1]})"), InvalidInput,
        Catch::Matchers::MessageMatches(ContainsSubstring("\"A\"")));
    CHECK_THROWS_AS(parse_problem("[1,2,3]"), InvalidInput);
    CHECK_THROWS_AS(parse_problem(R"({"m":-1,"n":2,"A":[],"b":[],"tau":[1,1]})"), InvalidInput);
}

TEST_CASE("problem JSON round-trips") {
    oracles::TestRng rng(5);
    const Problem p(oracles::random_matrix(rng, 3, 2, -2.0, 2.0),
                    oracles::random_vector(rng, 3, -2.0, 2.0),
                    oracles::random_vector(rng, 2, 0.0, 2.0));
    const Problem q = problem_from_json(problem_to_json(p));
    CHECK(q.a.entries() == p.a.entries());
    CHECK(q.b == p.b);
    CHECK(q.tau == p.tau);
}

TEST_CASE("multipliers JSON accepts both shapes") {
    CHECK(multipliers_from_json(json::parse("[1.0, 0.0, 2.5]")).lambda == Vector{1.0, 0.0, 2.5});
    CHECK(multipliers_from_json(json::parse(R"({"lambda":[4,0],"method":"diagonal_gram"})"))
              .lambda == Vector{4.0, 0.0});
    CHECK_THROWS_AS(multipliers_from_json(json::parse("[-1.0]")), InvalidInput);
    CHECK_THROWS_AS(multipliers_from_json(json::parse(R"({"weights":[1]})")), InvalidInput);
}

TEST_CASE("fmt17 round-trips doubles exactly") {
    oracles::TestRng rng(7);
    for (int rep = 0; rep < 500; ++rep) {
        const double v = rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-12.0, 12.0));
        CHECK(std::stod(fmt17(v)) == v);
    }
}

TEST_CASE("signal CSV round-trips") {
    const Signal s({0.1, -2.5, 1e-17, 3.0}, "noisy ramp");
    std::ostringstream out;
    write_signal_csv(out, s);
    std::istringstream in(out.str());
    const Signal back = read_signal_csv(in);
    CHECK(back.samples == s.samples);
    CHECK(back.label == s.label);
}

TEST_CASE("signal CSV rejects junk lines") {
    std::istringstream in("1.0\nbogus\n");
    CHECK_THROWS_MATCHES(read_signal_csv(in), InvalidInput,
                         Catch::Matchers::MessageMatches(ContainsSubstring("bogus")));
}

TEST_CASE("grid CSV format") {
    GridTable t;
    t.columns = {"u_0", "g"};
    t.rows = {{-1.0, 4.0}, {0.0, 2.25}};
    std::ostringstream out;
    write_grid_csv(out, t);
    CHECK(out.str() == "u_0,g\n-1,4\n0,2.25\n");
}

TEST_CASE("result serializers expose the documented keys") {
    SolveResult r;
    r.x = {1.0, 0.5};
    r.objective = 4.0;
    r.iterations = 12;
    r.converged = true;
    const json j = solve_result_to_json(r);
    CHECK(j.at("x") == json::array({1.0, 0.5}));
    CHECK(j.at("objective") == 4.0);
    CHECK(j.at("iterations") == 12);
    CHECK(j.at("converged") == true);

    MultiplierResult mr{Multipliers({4.0, 0.0}), MultiplierMethod::DiagonalGram, std::nullopt,
                        1e-10};
    const json mj = multiplier_result_to_json(mr);
    CHECK(mj.at("method") == "diagonal_gram");
    CHECK(mj.at("signature").is_null());
    CHECK(mj.at("lambda") == json::array({4.0, 0.0}));

    MultiplierResult sr{Multipliers({4.0, 4.0}), MultiplierMethod::GradientSignWithSignature,
                        Signature({1, -1}), 2.0};
    CHECK(multiplier_result_to_json(sr).at("signature") == json::array({1, -1}));
}
