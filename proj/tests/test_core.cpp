#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace testing;

namespace {

std::string two_state_doc(const std::string& mass) {
    return R"({"states":["a","b"],"actions":["x"],"target":["b"],"transitions":[
        {"from":"a","p1":"x","p2":"x","to":{"a":")" +
           mass + R"(","b":"1/3"}},
        {"from":"b","p1":"x","p2":"x","to":{"b":"1/1"}}]})";
}

Game permute_actions(const Game& g) {
    std::vector<std::string> actions(g.action_names().rbegin(), g.action_names().rend());
    const std::size_t m = g.num_actions();
    std::vector<Distribution> delta;
    for (StateId q = 0; q < g.num_states(); ++q)
        for (ActionId a = 0; a < m; ++a)
            for (ActionId b = 0; b < m; ++b) delta.push_back(g.delta(q, m - 1 - a, m - 1 - b));
    return Game(g.state_names(), std::move(actions), std::move(delta), g.target());
}

}  // namespace

TEST_CASE("rationals are kept in lowest terms", "[core]") {
    Rational r(6, -8);
    CHECK(r.str() == "-3/4");
    CHECK((Rational(1, 3) + Rational(1, 6)).str() == "1/2");
    CHECK(Rational::parse("10/4") == Rational(5, 2));
    CHECK_THROWS_AS(Rational::parse("1/0"), InputError);
    CHECK_THROWS_AS(Rational::parse("0.5"), InputError);
}

TEST_CASE("bundled instances load", "[core]") {
    Game gwin = instance("gwin");
    CHECK(gwin.num_states() == 3);
    CHECK(gwin.num_actions() == 2);
    CHECK(names(gwin, gwin.target()) == std::vector<std::string>{"q1", "q3"});

    Game g13 = instance("g13");
    CHECK(g13.num_states() == 4);
    CHECK(names(g13, g13.target()) == std::vector<std::string>{"q", "y"});
    for (const char* n : {"gwinp", "glose", "g7", "g10"}) CHECK_NOTHROW(instance(n));
}

TEST_CASE("malformed game documents are rejected", "[core]") {
    CHECK_NOTHROW(parse_game(two_state_doc("2/3")));
    try {
        parse_game(two_state_doc("1/2"));
        FAIL("expected an error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("distribution sums to 5/6") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_game("{\"states\": ["), InputError);
    CHECK_THROWS_AS(parse_game(R"({"states":["a"],"actions":["x"],"target":["zz"],
        "transitions":[{"from":"a","p1":"x","p2":"x","to":{"a":"1"}}]})"),
                    InputError);
    CHECK_THROWS_AS(parse_game(R"({"states":["a"],"actions":["x","y"],"target":["a"],
        "transitions":[{"from":"a","p1":"x","p2":"x","to":{"a":"1"}}]})"),
                    InputError);
}

TEST_CASE("validation classifies states", "[core]") {
    auto r = validate_game(instance("gwin"));
    REQUIRE(r.kinds.size() == 3);
    CHECK(r.kinds[0] == StateKind::player2);
    CHECK(r.kinds[1] == StateKind::player1);
    CHECK(r.kinds[2] == StateKind::both);
    CHECK(r.deterministic);
    CHECK(r.eta == Rational(1));
    CHECK(r.n == 3);

    auto g10 = validate_game(instance("g10"));
    CHECK_FALSE(g10.deterministic);
    CHECK(g10.eta == Rational(1, 2));

    Game loop({"s"}, {"a"}, {Distribution::dirac(0)}, StateSet(1, {0}));
    auto one = validate_game(loop);
    CHECK(one.kinds[0] == StateKind::both);
    CHECK(one.eta == Rational(1));
}

TEST_CASE("classification is stable under action renaming", "[core][property]") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Game g = suite_game(seed, 5);
        Game h = permute_actions(g);
        for (StateId q = 0; q < g.num_states(); ++q) CHECK(classify_state(g, q) == classify_state(h, q));
    }
}

TEST_CASE("serialization round-trips", "[core][property]") {
    for (const char* n : {"gwin", "gwinp", "glose", "g7", "g10", "g13"}) {
        Game g = instance(n);
        CHECK(parse_game(serialize_game(g)) == g);
    }
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Game g = suite_game(seed, 5);
        CHECK(parse_game(serialize_game(g)) == g);
        for (StateId q = 0; q < g.num_states(); ++q)
            for (ActionId a = 0; a < g.num_actions(); ++a)
                for (ActionId b = 0; b < g.num_actions(); ++b) CHECK(g.delta(q, a, b).total().is_one());
    }
}

TEST_CASE("distributions", "[core]") {
    Game g = instance("gwin");
    Distribution d = parse_distribution(g, "q1:1/2, q2:1/2");
    CHECK(d.total().is_one());
    CHECK(d.support(3) == set(g, {"q1", "q2"}));
    CHECK(format_distribution(g, d) == "q1:1/2,q2:1/2");
    CHECK_THROWS_AS(parse_distribution(g, "q1:1/2"), InputError);
    CHECK_THROWS_AS(parse_distribution(g, "q7:1"), InputError);
    CHECK(Distribution::uniform(g.all_states()).mass(0) == Rational(1, 3));
}

TEST_CASE("attaching an initial distribution", "[core]") {
    Game gwin = instance("gwin");
    Game h = attach_initial(gwin, parse_distribution(gwin, "q1:1/2,q2:1/2"));
    REQUIRE(h.num_states() == 4);
    const StateId qd = 3;
    for (ActionId a = 0; a < 2; ++a)
        for (ActionId b = 0; b < 2; ++b) CHECK(h.delta(qd, a, b).support(4) == set(h, {"q1", "q2"}));
    CHECK(h.target() == set(h, {"q1", "q3"}));

    Game dirac = attach_initial(gwin, Distribution::dirac(0));
    CHECK(dirac.delta(3, 1, 1) == Distribution::dirac(0));
    CHECK_THROWS_AS(attach_initial(gwin, Distribution::dirac(5)), InputError);

    Game g7 = instance("g7");
    Game both = attach_initial(g7, parse_distribution(g7, "x:1/2,y:1/2"));
    auto w = solve_as_weakly(both, both.target());
    CHECK_FALSE(w.winning_diracs.contains(g7.num_states()));
}

TEST_CASE("two-alphabet documents", "[core]") {
    const std::string doc = R"({"states":["a","b"],"p1_actions":["go","stay"],"p2_actions":["push"],
        "target":["b"],"transitions":[
        {"from":"a","p1":"go","p2":"push","to":{"b":"1"}},
        {"from":"a","p1":"stay","p2":"push","to":{"a":"1"}},
        {"from":"b","p1":"go","p2":"push","to":{"b":"1"}},
        {"from":"b","p1":"stay","p2":"push","to":{"b":"1"}}]})";
    CHECK_THROWS_AS(parse_game(doc), InputError);
    LoadOptions opts;
    opts.allow_two_alphabets = true;
    Game g = parse_game(doc, opts);
    CHECK(g.num_actions() == 3);
    CHECK(g.delta(0, g.action("go"), g.action("go")) == Distribution::dirac(1));
}
