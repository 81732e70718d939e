#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "syncgame/syncgame.hpp"

using namespace syncgame;

namespace {

enum ExitCode { ok = 0, input_error = 1, resource_error = 2, invariant_error = 3 };

struct Common {
    bool json = false;
};

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& s : names) out += (out.empty() ? "" : ",") + s;
    return out;
}

std::vector<std::size_t> parse_schedule(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& item : detail::split(text, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stoul(item));
        } catch (const std::exception&) {
            throw InputError("bad schedule entry \"" + item + "\"");
        }
    }
    return out;
}

void print(const Common& c, const Json& doc, const std::string& text) {
    if (c.json)
        std::cout << doc.dump(2) << "\n";
    else
        std::cout << text;
}

// --- solve -------------------------------------------------------------------

struct SolveArgs {
    std::string game, mode, win;
    bool certificate = false;
    std::size_t max_states = default_max_product_states;
};

void run_solve(const Common& c, const SolveArgs& a) {
    Game g = load_game(a.game);
    SolveOptions opts;
    opts.max_product_states = a.max_states;
    Mode mode = parse_mode(a.mode);
    WinKind win = parse_win(a.win);
    WinRegion w = solve(g, g.target(), mode, win, opts);
    Json doc = region_to_json(g, w);
    if (!a.certificate) doc.erase("certificate");
    doc["mode"] = to_string(mode);
    doc["win"] = to_string(win);

    std::ostringstream text;
    text << "winning diracs: {" << join(g.names_of(w.winning_diracs)) << "}\n";
    text << "maximal winning supports:";
    if (w.maximal_supports.empty()) text << " none";
    text << "\n";
    for (const auto& s : w.maximal_supports) text << "  {" << join(g.names_of(s)) << "}\n";
    if (a.certificate && w.certificate) text << certificate_to_json(g, *w.certificate).dump(2) << "\n";
    print(c, doc, text.str());
}

// --- membership --------------------------------------------------------------

struct MembershipArgs {
    std::string game, mode, win, dist;
};

void run_membership(const Common& c, const MembershipArgs& a) {
    Game g = load_game(a.game);
    Distribution d = parse_distribution(g, a.dist);
    auto r = membership(g, g.target(), parse_mode(a.mode), parse_win(a.win), d);
    Json doc;
    doc["member"] = r.member;
    if (r.support) doc["support"] = g.names_of(*r.support);
    if (r.index) doc["index"] = *r.index;
    std::ostringstream text;
    text << (r.member ? "true" : "false");
    if (r.support) text << " (within {" << join(g.names_of(*r.support)) << "})";
    if (r.index) text << " (common index " << *r.index << ")";
    text << "\n";
    print(c, doc, text.str());
}

// --- simulate ----------------------------------------------------------------

struct SimulateArgs {
    std::string game, p1, p2 = "uniform", dist, schedule = "4,8,16,32,64,128";
    std::size_t horizon = 20;
    bool csv = false;
};

void run_simulate(const Common& c, const SimulateArgs& a) {
    Game g = load_game(a.game);
    Distribution d = parse_distribution(g, a.dist);
    Player1Strategy sigma;
    if (a.p1 == "as-weakly") {
        auto w = solve_as_weakly(g, g.target());
        AsWeaklyStrategy strat(g, *w.certificate, parse_schedule(a.schedule));
        auto c0 = strat.start_counter(d.support(g.num_states()));
        if (!c0) throw InputError("the distribution is not almost-sure weakly winning");
        sigma = strat.for_base(*c0);
    } else {
        sigma = player1_from_json(g, read_json_file(a.p1));
    }
    Player2Strategy tau = a.p2 == "uniform" ? Player2Strategy::uniform() : player2_from_json(g, read_json_file(a.p2));
    OutcomeSequence seq = outcome_sequence(g, sigma, tau, d, a.horizon);
    if (a.csv) {
        std::cout << outcome_csv(g, seq, g.target());
        return;
    }
    Json rows = Json::array();
    std::ostringstream text;
    for (std::size_t i = 0; i < seq.steps.size(); ++i) {
        Rational m = seq.mass(i, g.target());
        rows.push_back({{"round", i}, {"distribution", format_distribution(g, seq.steps[i])}, {"target", m.str()}});
        text << i << "  " << m.str() << "  " << format_distribution(g, seq.steps[i]) << "\n";
    }
    Json doc;
    doc["rounds"] = std::move(rows);
    print(c, doc, text.str());
}

// --- subset ------------------------------------------------------------------

struct SubsetArgs {
    std::string game, seed;
    bool dot = false;
    std::size_t budget = default_vertex_budget;
};

void run_subset(const Common& c, const SubsetArgs& a) {
    Game g = load_game(a.game);
    SubsetGraph graph(g, a.budget);
    if (a.seed.empty()) {
        for (StateId q = 0; q < g.num_states(); ++q) {
            StateSet s(g.num_states());
            s.insert(q);
            graph.explore(s);
        }
    } else {
        graph.explore(parse_state_list(g, a.seed));
    }
    if (a.dot) {
        std::cout << to_dot(graph);
        return;
    }
    Json vertices = Json::array();
    std::ostringstream text;
    for (std::size_t v = 0; v < graph.size(); ++v) {
        Json succ = Json::array();
        std::string line;
        for (const auto& e : graph.edges(v)) {
            succ.push_back(e.to);
            line += (line.empty() ? "" : " ") + std::to_string(e.to);
        }
        vertices.push_back({{"id", v}, {"states", g.names_of(graph.vertex(v))}, {"successors", std::move(succ)}});
        text << v << " " << format_set(g, graph.vertex(v)) << " -> " << line << "\n";
    }
    Json sccs = Json::array();
    for (const auto& s : scc_periods(graph)) {
        sccs.push_back({{"vertices", s.vertices}, {"period", s.period}});
        text << "scc";
        for (auto v : s.vertices) text << " " << v;
        text << " period " << s.period << "\n";
    }
    Json doc;
    doc["vertices"] = std::move(vertices);
    doc["sccs"] = std::move(sccs);
    if (auto acc = find_accepting_scc(g, g.target(), a.budget)) {
        doc["accepting"] = {{"U", g.names_of(acc->accepting)}, {"period", acc->period}};
        text << "accepting " << format_set(g, acc->accepting) << " period " << acc->period << "\n";
    } else {
        doc["accepting"] = nullptr;
        text << "accepting none\n";
    }
    print(c, doc, text.str());
}

// --- oracle ------------------------------------------------------------------

struct OracleArgs {
    std::string game, objective, states;
};

int run_oracle(const Common& c, const OracleArgs& a) {
    Game g = load_game(a.game);
    StateSet t = a.states.empty() ? g.target() : parse_state_list(g, a.states);
    StateObjective obj = parse_objective(a.objective);
    StateSet fix = solve_objective(g, t, obj);
    StateSet brute = brute_force_statebased(g, t, obj);
    Json doc;
    doc["objective"] = to_string(obj);
    doc["fixpoint"] = g.names_of(fix);
    doc["bruteForce"] = g.names_of(brute);
    doc["agree"] = fix == brute;
    std::ostringstream text;
    text << "fixpoint:    {" << join(g.names_of(fix)) << "}\n";
    text << "brute force: {" << join(g.names_of(brute)) << "}\n";
    text << (fix == brute ? "agree" : "DISAGREE") << "\n";
    print(c, doc, text.str());
    return fix == brute ? ok : invariant_error;
}

// --- gen / reduce --------------------------------------------------------------

struct GenArgs {
    std::uint64_t seed = 0;
    RandomGameOptions opt;
    std::string out;
};

void run_gen(const Common& c, const GenArgs& a) {
    Game g = random_game(a.seed, a.opt);
    write_file(a.out, serialize_game(g));
    Json doc = {{"out", a.out}, {"states", g.num_states()}, {"actions", g.num_actions()}};
    print(c, doc, "wrote " + a.out + "\n");
}

struct ReduceArgs {
    std::string game, init, target, out;
};

void run_reduce(const Common& c, const ReduceArgs& a) {
    Game g = load_game(a.game);
    StateSet t = a.target.empty() ? g.target() : parse_state_list(g, a.target);
    ReducedGame r = mdp_to_weakly_game(g, t, g.state(a.init));
    write_file(a.out, serialize_game(r.game));
    Json doc = {{"out", a.out}, {"target", r.game.names_of(r.target)}};
    print(c, doc, "wrote " + a.out + "\n");
}

int report(const Common& c, int code, const std::string& kind, const std::string& message) {
    if (c.json)
        std::cout << Json{{"error", {{"kind", kind}, {"message", message}}}}.dump(2) << "\n";
    else
        std::cerr << "error: " << message << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synchronizing objectives in two-player stochastic games"};
    app.require_subcommand(1);
    Common common;
    app.add_flag("--json", common.json, "Machine-readable output");
    app.fallthrough();

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Winning region for a mode and winning condition");
    solve_cmd->add_option("--game", solve_args.game)->required();
    solve_cmd->add_option("--mode", solve_args.mode)->required();
    solve_cmd->add_option("--win", solve_args.win)->required();
    solve_cmd->add_flag("--certificate", solve_args.certificate);
    solve_cmd->add_option("--max-period", solve_args.max_states, "Cap on product states (|Q| times period)");

    MembershipArgs mem_args;
    auto* mem_cmd = app.add_subcommand("membership", "Is a distribution winning?");
    mem_cmd->add_option("--game", mem_args.game)->required();
    mem_cmd->add_option("--mode", mem_args.mode)->required();
    mem_cmd->add_option("--win", mem_args.win)->required();
    mem_cmd->add_option("--dist", mem_args.dist)->required();

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "Exact outcome sequence");
    sim_cmd->add_option("--game", sim_args.game)->required();
    sim_cmd->add_option("--p1", sim_args.p1, "Strategy JSON file, or as-weakly")->required();
    sim_cmd->add_option("--p2", sim_args.p2, "uniform or a strategy JSON file");
    sim_cmd->add_option("--dist", sim_args.dist)->required();
    sim_cmd->add_option("--horizon", sim_args.horizon);
    sim_cmd->add_option("--schedule", sim_args.schedule, "Phase lengths for as-weakly");
    sim_cmd->add_flag("--csv", sim_args.csv);

    SubsetArgs sub_args;
    auto* sub_cmd = app.add_subcommand("subset", "Explore the subset construction");
    sub_cmd->add_option("--game", sub_args.game)->required();
    sub_cmd->add_option("--seed", sub_args.seed, "Comma-separated states; default every singleton");
    sub_cmd->add_option("--budget", sub_args.budget);
    sub_cmd->add_flag("--dot", sub_args.dot);

    OracleArgs or_args;
    auto* or_cmd = app.add_subcommand("oracle", "Fixpoint solver against exhaustive enumeration");
    or_cmd->add_option("--game", or_args.game)->required();
    or_cmd->add_option("--objective", or_args.objective)->required();
    or_cmd->add_option("--states", or_args.states, "Target states; default the game's target");

    GenArgs gen_args;
    bool deterministic = false, mdp = false;
    auto* gen_cmd = app.add_subcommand("gen", "Random game");
    gen_cmd->add_option("--seed", gen_args.seed)->required();
    gen_cmd->add_option("--states", gen_args.opt.states)->required();
    gen_cmd->add_option("--actions", gen_args.opt.actions)->required();
    gen_cmd->add_option("--branching", gen_args.opt.branching);
    gen_cmd->add_option("--granularity", gen_args.opt.granularity);
    gen_cmd->add_flag("--deterministic", deterministic);
    gen_cmd->add_flag("--mdp", mdp);
    gen_cmd->add_option("--out", gen_args.out)->required();

    ReduceArgs red_args;
    auto* red_cmd = app.add_subcommand("reduce", "MDP eventually to game weakly reduction");
    red_cmd->add_option("--game", red_args.game)->required();
    red_cmd->add_option("--init", red_args.init)->required();
    red_cmd->add_option("--target", red_args.target, "Default the game's target");
    red_cmd->add_option("--out", red_args.out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report(common, input_error, "input", e.what());
    }

    try {
        if (*solve_cmd) run_solve(common, solve_args);
        if (*mem_cmd) run_membership(common, mem_args);
        if (*sim_cmd) run_simulate(common, sim_args);
        if (*sub_cmd) run_subset(common, sub_args);
        if (*or_cmd) return run_oracle(common, or_args);
        if (*gen_cmd) {
            gen_args.opt.deterministic = deterministic;
            gen_args.opt.mdp = mdp;
            run_gen(common, gen_args);
        }
        if (*red_cmd) run_reduce(common, red_args);
    } catch (const InputError& e) {
        return report(common, input_error, "input", e.what());
    } catch (const ResourceCapError& e) {
        return report(common, resource_error, "resource", e.what());
    } catch (const InvariantError& e) {
        return report(common, invariant_error, "invariant", e.what());
    } catch (const Json::exception& e) {
        return report(common, input_error, "input", e.what());
    }
    return ok;
}
