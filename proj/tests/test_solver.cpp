#include <catch_amalgamated.hpp>

#include <algorithm>
#include <fstream>
#include <random>

#include "support.hpp"

using namespace testing;

namespace {

constexpr Mode all_modes[] = {Mode::always, Mode::eventually, Mode::weakly, Mode::strongly};

std::vector<const ThenStep*> thens(const SolveCertificate& c) {
    std::vector<const ThenStep*> out;
    for (const auto& it : c.iterations)
        if (const auto* t = std::get_if<ThenStep>(&it)) out.push_back(t);
    return out;
}

std::vector<const ElseStep*> elses(const SolveCertificate& c) {
    std::vector<const ElseStep*> out;
    for (const auto& it : c.iterations)
        if (const auto* e = std::get_if<ElseStep>(&it)) out.push_back(e);
    return out;
}

Distribution random_distribution(std::mt19937_64& rng, std::size_t n) {
    std::vector<Distribution::Entry> e;
    std::vector<long> w;
    long total = 0;
    for (StateId q = 0; q < n; ++q)
        if (rng() % 2 == 0) {
            long x = 1 + static_cast<long>(rng() % 3);
            e.emplace_back(q, Rational(x));
            total += x;
        }
    if (e.empty()) return Distribution::dirac(rng() % n);
    for (auto& [q, p] : e) p = p / Rational(total);
    return Distribution(std::move(e));
}

}  // namespace

TEST_CASE("sure winning on the bundled games", "[solver]") {
    Game g = instance("gwin");
    CHECK(solve_sure(g, g.target(), Mode::weakly).winning_diracs == set(g, {"q2", "q3"}));
    CHECK(solve_sure(g, g.target(), Mode::eventually).winning_diracs == g.all_states());
    CHECK(solve_sure(g, g.target(), Mode::always).winning_diracs.empty());
    auto ev = solve_sure(g, g.target(), Mode::eventually);
    REQUIRE(ev.chain.size() >= 3);
    CHECK(ev.chain[0] == g.target());
    CHECK(ev.chain[1] == set(g, {"q2"}));
    CHECK(ev.chain[2] == set(g, {"q2", "q3"}));
    Game gl = instance("glose");
    CHECK(solve_sure(gl, gl.target(), Mode::weakly).winning_diracs.empty());
}

TEST_CASE("periodic schemes", "[solver]") {
    Game gwin = instance("gwin");
    auto s = periodic_scheme(make_arena(gwin, 1, gwin.all_states()), set(gwin, {"q3"}), 0);
    CHECK(s.hub == set(gwin, {"q2", "q3"}));
    CHECK(s.period == 1);
    CHECK(s.preperiod == 2);
    REQUIRE(s.trace.size() == 4);
    CHECK(s.trace[1] == set(gwin, {"q2"}));

    Game gwinp = instance("gwinp");
    auto p = periodic_scheme(make_arena(gwinp, 1, gwinp.all_states()), set(gwinp, {"q3"}), 0);
    CHECK(p.hub == set(gwinp, {"q3"}));
    CHECK(p.period == 2);
    CHECK(p.preperiod == 0);

    CHECK_THROWS_AS(periodic_scheme(make_arena(gwin, 1, gwin.all_states()), gwin.empty_set(), 0), InputError);
}

TEST_CASE("self-recurrent candidates", "[solver]") {
    Game gwin = instance("gwin");
    Arena full = make_arena(gwin, 1, gwin.all_states());
    StateSet u = set(gwin, {"q3"});
    CHECK(is_self_recurrent(gwin, u, periodic_scheme(full, u, 0), gwin.all_states(), 1) == 0u);
    StateSet both = set(gwin, {"q1", "q3"});
    CHECK_FALSE(is_self_recurrent(gwin, both, periodic_scheme(full, both, 0), gwin.all_states(), 1).has_value());

    Game g13 = instance("g13");
    StateSet y = set(g13, {"y"});
    auto sy = periodic_scheme(make_arena(g13, 1, g13.all_states()), y, 0);
    CHECK(sy.period == 1);
    CHECK(is_self_recurrent(g13, y, sy, g13.all_states(), 1) == 0u);
}

TEST_CASE("almost-sure weakly on the bundled games", "[solver]") {
    Game gwin = instance("gwin");
    CHECK(solve_as_weakly(gwin, gwin.target()).winning_diracs == gwin.all_states());

    Game gwinp = instance("gwinp");
    auto wp = solve_as_weakly(gwinp, gwinp.target());
    CHECK(wp.winning_diracs == set(gwinp, {"q2", "q3"}));
    REQUIRE(wp.certificate);
    CHECK(wp.certificate->final_period == 2);
    CHECK(product_names(gwinp, wp.certificate->final_region, 2) == std::vector<std::string>{"q2@1", "q3@0"});

    Game g13 = instance("g13");
    auto w13 = solve_as_weakly(g13, g13.target());
    CHECK(w13.winning_diracs == set(g13, {"x", "y"}));
    REQUIRE(w13.certificate);
    auto t13 = thens(*w13.certificate);
    REQUIRE_FALSE(t13.empty());
    CHECK(t13[0]->candidate == set(g13, {"y"}));
    CHECK(project(t13[0]->core, 4) == set(g13, {"x", "y"}));
    bool qs = false;
    for (const auto* e : elses(*w13.certificate)) qs = qs || project(e->removed, 4) == set(g13, {"q", "s"});
    CHECK(qs);

    Game g10 = instance("g10");
    CHECK(solve_as(g10, g10.target(), Mode::weakly).winning_diracs == g10.all_states());
    Game g7 = instance("g7");
    CHECK(solve_as_weakly(g7, g7.target()).winning_diracs == g7.all_states());
    Game gl = instance("glose");
    CHECK(solve_as_weakly(gl, gl.target()).winning_diracs.empty());
    CHECK(solve_as(gl, gl.target(), Mode::eventually).winning_diracs == gl.all_states());
}

TEST_CASE("deterministic algorithm on the bundled games", "[solver]") {
    Game gwin = instance("gwin");
    CHECK(solve_as_weakly_det(gwin, gwin.target()) == gwin.all_states());
    Game gl = instance("glose");
    CHECK(solve_as_weakly_det(gl, gl.target()).empty());
    Game g7 = instance("g7");
    REQUIRE(g7.is_deterministic());
    CHECK(solve_as_weakly_det(g7, g7.target()) == g7.all_states());
    CHECK_THROWS_AS(solve_as_weakly_det(instance("g13"), instance("g13").target()), InputError);
}

TEST_CASE("membership", "[solver]") {
    Game g7 = instance("g7");
    auto r = membership(g7, g7.target(), Mode::weakly, WinKind::almost_sure, parse_distribution(g7, "x:1/2,y:1/2"));
    CHECK_FALSE(r.member);
    Game gwin = instance("gwin");
    auto ev = membership(gwin, gwin.target(), Mode::eventually, WinKind::sure, parse_distribution(gwin, "q2:1/2,q3:1/2"));
    CHECK(ev.member);
    CHECK(ev.index == 2u);
    for (StateId q = 0; q < 3; ++q)
        CHECK(membership(gwin, gwin.target(), Mode::weakly, WinKind::almost_sure, Distribution::dirac(q)).member);
}

TEST_CASE("membership agrees with the attached initial state", "[solver][property]") {
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        Game g = suite_game(seed, 4);
        Distribution d = random_distribution(rng, g.num_states());
        Game h = attach_initial(g, d);
        const StateId qd = g.num_states();
        for (Mode mode : all_modes)
            for (WinKind win : {WinKind::sure, WinKind::almost_sure}) {
                StateSet t(h.num_states());
                g.target().for_each([&](StateId q) { t.insert(q); });
                // Under "always" the fresh state is itself a round of the play.
                if (mode == Mode::always) t.insert(qd);
                bool direct = membership(g, g.target(), mode, win, d).member;
                bool attached = solve(h, t, mode, win).winning_diracs.contains(qd);
                INFO("seed " << seed << " mode " << to_string(mode) << " " << to_string(win));
                CHECK(direct == attached);
            }
    }
}

TEST_CASE("certificates replay exactly", "[solver][property]") {
    for (const char* n : {"gwin", "gwinp", "glose", "g7", "g10", "g13"}) {
        Game g = instance(n);
        auto w = solve_as_weakly(g, g.target());
        REQUIRE(w.certificate);
        CHECK(replay_certificate(g, g.target(), *w.certificate) == w.certificate->final_region);
        CHECK(certificate_to_json(g, *w.certificate).contains("iterations"));
    }
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Game g = suite_game(seed, 5);
        auto w = solve_as_weakly(g, g.target());
        CHECK(replay_certificate(g, g.target(), *w.certificate) == w.certificate->final_region);
        CHECK(w.certificate->iterations.size() <= g.num_states() * g.num_states() + g.num_states());
    }
}

TEST_CASE("winning regions are downward closed antichains", "[solver][property]") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Game g = suite_game(seed, 4);
        for (Mode mode : all_modes)
            for (WinKind win : {WinKind::sure, WinKind::almost_sure}) {
                auto w = solve(g, g.target(), mode, win);
                StateSet diracs(g.num_states());
                for (std::size_t i = 0; i < w.maximal_supports.size(); ++i) {
                    diracs |= w.maximal_supports[i];
                    for (std::size_t j = 0; j < w.maximal_supports.size(); ++j)
                        if (i != j) CHECK_FALSE(w.maximal_supports[i].subset_of(w.maximal_supports[j]));
                }
                CHECK(diracs == w.winning_diracs);
                for (const auto& s : w.maximal_supports)
                    for (const auto& sub : nonempty_subsets(s))
                        CHECK(membership(g, g.target(), mode, win, Distribution::uniform(sub)).member);
            }
    }
}

TEST_CASE("resource caps", "[solver]") {
    Game g = instance("gwinp");
    SolveOptions tight;
    tight.max_product_states = 3;
    CHECK_THROWS_AS(solve_as_weakly(g, g.target(), tight), ResourceCapError);
    SolveOptions small;
    small.vertex_budget = 2;
    CHECK_THROWS_AS(solve_sure(instance("gwin"), g.target(), Mode::weakly, small), ResourceCapError);
}

TEST_CASE("bundled expected results", "[solver]") {
    for (const char* name : {"gwin", "gwinp", "glose", "g7", "g10", "g13"}) {
        INFO(name);
        Game g = instance(name);
        std::ifstream in(std::string(SYNCGAME_INSTANCE_DIR) + "/" + name + ".expected.json");
        REQUIRE(in);
        Json expected = Json::parse(in);
        for (const auto& [key, states] : expected.at("diracs").items()) {
            auto space = key.find(' ');
            WinKind win = parse_win(key.substr(0, space));
            Mode mode = parse_mode(key.substr(space + 1));
            CHECK(solve(g, g.target(), mode, win).winning_diracs == set(g, states.get<std::vector<std::string>>()));
        }
        auto w = solve_as_weakly(g, g.target());
        if (expected.contains("final_period")) CHECK(w.certificate->final_period == expected.at("final_period").get<std::size_t>());
        if (expected.contains("then_candidate")) {
            const std::size_t n = g.num_states();
            StateSet u = set(g, expected.at("then_candidate").get<std::vector<std::string>>());
            StateSet core = set(g, expected.at("then_core").get<std::vector<std::string>>());
            StateSet removed = set(g, expected.at("else_removed").get<std::vector<std::string>>());
            auto th = thens(*w.certificate);
            auto el = elses(*w.certificate);
            CHECK(std::any_of(th.begin(), th.end(), [&](auto* t) { return t->candidate == u && project(t->core, n) == core; }));
            CHECK(std::any_of(el.begin(), el.end(), [&](auto* e) { return project(e->removed, n) == removed; }));
        }
    }
}
