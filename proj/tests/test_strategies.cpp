#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace testing;

namespace {

const std::vector<std::size_t> schedule{4, 8, 16, 32};

/// d_e(T) at every block end e within the horizon, from the given support.
std::vector<Rational> block_end_masses(const Game& g, const AsWeaklyStrategy& s, const StateSet& support,
                                       std::size_t horizon) {
    auto c0 = s.start_counter(support);
    REQUIRE(c0.has_value());
    auto seq = outcome_sequence(g, s.for_base(*c0), Player2Strategy::uniform(), Distribution::uniform(support), horizon);
    std::vector<Rational> out;
    for (const auto& b : s.blocks(*c0))
        if (b.end <= horizon) out.push_back(seq.mass(b.end, g.target()));
    return out;
}

}  // namespace

TEST_CASE("sure strategies for the bundled games", "[strategies]") {
    Game g = instance("gwin");
    SelectorLasso weak = synth_sure_strategy(g, g.target(), Mode::weakly, g.state("q2"));
    auto supports = support_sequence(g, weak, set(g, {"q2"}), 6);
    std::vector<StateSet> expect{set(g, {"q2"}), set(g, {"q3"}), set(g, {"q2"}), set(g, {"q3"})};
    for (std::size_t i = 0; i < expect.size(); ++i) CHECK(supports[i] == expect[i]);
    CHECK(weak.at(0)[g.state("q2")] == g.action("a2"));

    SelectorLasso ev = synth_sure_strategy(g, g.target(), Mode::eventually, g.state("q1"));
    CHECK(ev.prefix.empty());
    CHECK_FALSE(ev.cycle.empty());

    Game gl = instance("glose");
    try {
        synth_sure_strategy(gl, gl.target(), Mode::weakly, gl.state("q2"));
        FAIL("expected an error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("not sure-winning") != std::string::npos);
    }
    CHECK_THROWS_AS(synth_sure_strategy(g, g.target(), Mode::always, 0), InputError);
}

TEST_CASE("sure lassos meet the target at their witness rounds", "[strategies][property]") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        Game g = suite_game(seed, 5);
        const std::size_t n = g.num_states();
        const StateSet& t = g.target();
        auto ev = solve_sure(g, t, Mode::eventually).winning_diracs;
        auto wk = solve_sure(g, t, Mode::weakly).winning_diracs;
        for (StateId q = 0; q < n; ++q) {
            StateSet start = StateSet::singleton(n, q);
            if (ev.contains(q)) {
                SelectorLasso l = synth_sure_strategy(g, t, Mode::eventually, q);
                CHECK(support_sequence(g, l, start, l.prefix.size()).back().subset_of(t));
            } else {
                CHECK_THROWS_AS(synth_sure_strategy(g, t, Mode::eventually, q), InputError);
            }
            if (wk.contains(q)) {
                SelectorLasso l = synth_sure_strategy(g, t, Mode::weakly, q);
                const std::size_t h = l.prefix.size() + 3 * l.cycle.size();
                auto s = support_sequence(g, l, start, h);
                for (std::size_t i = l.prefix.size(); i <= h; i += l.cycle.size()) CHECK(s[i].subset_of(t));
            } else {
                CHECK_THROWS_AS(synth_sure_strategy(g, t, Mode::weakly, q), InputError);
            }
        }
    }
}

TEST_CASE("almost-sure weakly strategy block ends never lose mass", "[strategies][property]") {
    for (const char* name : {"gwin", "gwinp", "g7", "g10", "g13"}) {
        Game g = instance(name);
        auto w = solve_as_weakly(g, g.target());
        AsWeaklyStrategy s(g, *w.certificate, schedule);
        const std::size_t horizon = s.blocks(0).back().end + s.period();
        for (const auto& support : w.maximal_supports) {
            INFO(name << " from " << format_set(g, support));
            auto masses = block_end_masses(g, s, support, horizon);
            REQUIRE(masses.size() >= 3);
            for (std::size_t i = 1; i < masses.size(); ++i) CHECK(masses[i] >= masses[i - 1]);
            CHECK(masses.back() > Rational(9, 10));
        }
    }
}

TEST_CASE("G13 strategy from x synchronizes in y at counter 0", "[strategies]") {
    Game g = instance("g13");
    auto w = solve_as_weakly(g, g.target());
    AsWeaklyStrategy s(g, *w.certificate, schedule);
    StateSet x = set(g, {"x"});
    auto c0 = s.start_counter(x);
    REQUIRE(c0.has_value());
    auto seq = outcome_sequence(g, s.for_base(*c0), Player2Strategy::uniform(), Distribution::dirac(g.state("x")),
                                s.blocks(*c0).back().end);
    for (const auto& b : s.blocks(*c0)) {
        CHECK((*c0 + s.period() * b.end - b.end) % s.period() == 0);
        CHECK(seq.steps[b.end].mass(g.state("y")) > Rational(0));
    }
    CHECK(seq.steps[s.blocks(*c0).back().end].mass(g.state("y")) > Rational(99, 100));
}

TEST_CASE("one-block schedule synchronizes once", "[strategies]") {
    Game g = instance("gwin");
    auto w = solve_as_weakly(g, g.target());
    AsWeaklyStrategy s(g, *w.certificate, {6});
    REQUIRE(s.blocks(0).size() == 1);
    const std::size_t end = s.blocks(0)[0].end;
    auto seq = outcome_sequence(g, s.for_base(0), Player2Strategy::uniform(), Distribution::dirac(0), end + 20);
    CHECK(seq.mass(end, g.target()) >= Rational(1) - Rational(1, 64));
    CHECK(seq.mass(end + 20, g.target()) < Rational(1, 1000));
}

TEST_CASE("almost-sure weakly strategy input checks", "[strategies]") {
    Game g = instance("gwin");
    auto w = solve_as_weakly(g, g.target());
    CHECK_THROWS_AS(AsWeaklyStrategy(g, *w.certificate, {}), InputError);
    CHECK_THROWS_AS(AsWeaklyStrategy(g, *w.certificate, {4, 4}), InputError);
    CHECK_THROWS_AS(AsWeaklyStrategy(g, *w.certificate, {0, 4}), InputError);
    Game gl = instance("glose");
    auto lose = solve_as_weakly(gl, gl.target());
    CHECK_THROWS_AS(AsWeaklyStrategy(gl, *lose.certificate, {4}), InputError);

    AsWeaklyStrategy s(g, *w.certificate, {4, 8});
    auto table = s.table(30);
    REQUIRE(table.size() == 30);
    for (std::size_t i = 0; i < 30; ++i)
        for (StateId x = 0; x < 3; ++x) CHECK(table[i][x] == s.action(i, x));
}

TEST_CASE("spoiling bounds", "[strategies]") {
    auto one = spoil_bounds(1, Rational(1));
    CHECK(one.epsilon_w == Rational(1, 32));
    CHECK(one.n_w == Rational(4));

    auto two = spoil_bounds(2, Rational(1, 2));
    CHECK(two.n_w == Rational(16));
    CHECK(two.epsilon_w == Rational(1, 4) * pow(pow(Rational(1, 2), 12) / Rational(32), 4));

    for (std::size_t n = 1; n <= 4; ++n)
        for (Rational eta : {Rational(1), Rational(1, 2), Rational(1, 3)}) {
            auto b = spoil_bounds(n, eta);
            CHECK(b.n_w == pow(Rational(4), static_cast<unsigned long>(n)));
            CHECK(b.epsilon_w.is_positive());
            CHECK(b.epsilon_w < Rational(1));
        }
    CHECK_THROWS_AS(spoil_bounds(7, Rational(1)), ResourceCapError);
    CHECK_THROWS_AS(spoil_bounds(2, Rational(0)), InputError);
    CHECK(spoil_bounds(instance("gwin")).n_w == Rational(64));
}

TEST_CASE("substitution game", "[strategies]") {
    auto ok = substitution_game(3, 4, all_pass(), 10000);
    CHECK(ok.sustained);
    CHECK(ok.steps == 10000);
    CHECK(ok.max_roster <= 4);
    CHECK(ok.invariant_violations == 0);

    auto short_bench = substitution_game(3, 3, all_pass(), 10000);
    CHECK_FALSE(short_bench.sustained);
    CHECK(short_bench.depleted_at.has_value());

    auto single = substitution_game(0, 1, random_pass(3), 1000, true);
    CHECK(single.sustained);
    CHECK(single.max_roster == 1);
    for (const auto& s : single.trace) CHECK(s.roster.size() == 1);

    for (std::size_t n : {1, 2, 5})
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto r = substitution_game(n, n + 1, random_pass(seed), 2000, true);
            CHECK(r.sustained);
            CHECK(r.invariant_violations == 0);
            for (const auto& s : r.trace) {
                CHECK(s.roster.size() <= n + 1);
                for (auto p : s.roster) CHECK(s.passes[p] <= n);
            }
        }
}

TEST_CASE("strategy documents", "[strategies]") {
    Game g = instance("gwin");
    SelectorLasso l = synth_sure_strategy(g, g.target(), Mode::weakly, g.state("q2"));
    Json doc = lasso_to_json(g, l);
    Player1Strategy back = player1_from_json(g, doc);
    for (std::size_t i = 0; i < 10; ++i)
        for (StateId q = 0; q < 3; ++q) CHECK(back.choose(i, q)[0].first == l.at(i)[q]);

    Json mem = {{"kind", "memoryless"}, {"choice", {{"q1", "a1"}, {"q2", "a2"}, {"q3", "a1"}}}};
    CHECK(player1_from_json(g, mem).choose(5, 1)[0].first == 1);

    Json p2 = {{"kind", "superposition"},
               {"components",
                {{{"weight", "1/2"}, {"strategy", {{"kind", "uniform"}}}},
                 {{"weight", "1/2"}, {"strategy", {{"kind", "memoryless"}, {"reply", {{"q1", {{"a1", "a2"}}}}}}}}}}};
    auto tau = player2_from_json(g, p2);
    CHECK(tau.kind == Player2Strategy::Kind::superposition);
    auto seq = outcome_sequence(g, Player1Strategy::memoryless({0, 0, 0}), tau, Distribution::dirac(0), 1);
    CHECK(seq.steps[1].mass(1) == Rational(3, 4));

    CHECK_THROWS_AS(player1_from_json(g, Json{{"kind", "mixed"}}), InputError);
    CHECK_THROWS_AS(player1_from_json(g, Json{{"kind", "memoryless"}, {"choice", {{"q9", "a1"}}}}), InputError);
}
