#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "syncgame/game.hpp"

namespace syncgame {

using Json = nlohmann::ordered_json;

struct LoadOptions {
    /// Accept documents with separate "p1_actions" / "p2_actions" alphabets. The shared
    /// alphabet is their ordered union; an action outside a player's own alphabet behaves
    /// like that player's first action.
    bool allow_two_alphabets = false;
};

namespace detail {

inline const Json& require(const Json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key))
        throw InputError(std::string("missing field \"") + key + "\"");
    return obj.at(key);
}

inline std::vector<std::string> string_list(const Json& arr, const char* what) {
    if (!arr.is_array()) throw InputError(std::string("\"") + what + "\" must be an array");
    std::vector<std::string> out;
    for (const auto& v : arr) {
        if (!v.is_string()) throw InputError(std::string("\"") + what + "\" must hold strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

inline Rational json_rational(const Json& v) {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
    throw InputError("probabilities must be \"num/den\" strings");
}

}  // namespace detail

inline Game game_from_json(const Json& doc, const LoadOptions& opts = {}) {
    using detail::require;
    if (!doc.is_object()) throw InputError("game document must be a JSON object");
    auto states = detail::string_list(require(doc, "states"), "states");

    std::vector<std::string> actions, p1_actions, p2_actions;
    bool two = opts.allow_two_alphabets && doc.contains("p1_actions");
    if (two) {
        p1_actions = detail::string_list(require(doc, "p1_actions"), "p1_actions");
        p2_actions = detail::string_list(require(doc, "p2_actions"), "p2_actions");
        if (p1_actions.empty() || p2_actions.empty()) throw InputError("empty action alphabet");
        actions = p1_actions;
        for (const auto& b : p2_actions)
            if (std::find(actions.begin(), actions.end(), b) == actions.end()) actions.push_back(b);
    } else {
        actions = detail::string_list(require(doc, "actions"), "actions");
        p1_actions = p2_actions = actions;
    }
    if (states.empty()) throw InputError("game has no states");
    if (actions.empty()) throw InputError("game has no actions");

    std::unordered_map<std::string, StateId> sidx;
    for (StateId i = 0; i < states.size(); ++i)
        if (!sidx.emplace(states[i], i).second) throw InputError("duplicate state \"" + states[i] + "\"");
    auto state_of = [&](const std::string& s, const char* ctx) {
        auto it = sidx.find(s);
        if (it == sidx.end()) throw InputError(std::string("unknown state \"") + s + "\" in " + ctx);
        return it->second;
    };
    auto index_in = [](const std::vector<std::string>& alpha, const std::string& a, const char* ctx) {
        auto it = std::find(alpha.begin(), alpha.end(), a);
        if (it == alpha.end()) throw InputError(std::string("unknown action \"") + a + "\" in " + ctx);
        return static_cast<std::size_t>(it - alpha.begin());
    };

    const std::size_t n = states.size(), m1 = p1_actions.size(), m2 = p2_actions.size();
    std::vector<std::optional<Distribution>> own(n * m1 * m2);
    const auto& trans = require(doc, "transitions");
    if (!trans.is_array()) throw InputError("\"transitions\" must be an array");
    for (const auto& t : trans) {
        auto from = require(t, "from").get<std::string>();
        auto a = require(t, "p1").get<std::string>();
        auto b = require(t, "p2").get<std::string>();
        StateId q = state_of(from, "transition source");
        std::size_t ai = index_in(p1_actions, a, "transition"), bi = index_in(p2_actions, b, "transition");
        const auto& to = require(t, "to");
        if (!to.is_object()) throw InputError("\"to\" must be an object");
        std::vector<Distribution::Entry> entries;
        Rational sum;
        for (auto it = to.begin(); it != to.end(); ++it) {
            auto p = detail::json_rational(it.value());
            if (p.is_zero() || !p.is_positive())
                throw InputError("non-positive probability in transition (" + from + "," + a + "," + b + ")");
            sum += p;
            entries.emplace_back(state_of(it.key(), "transition target"), p);
        }
        std::string where = "(" + from + "," + a + "," + b + ")";
        if (!sum.is_one()) throw InputError("distribution sums to " + sum.str() + " at " + where);
        auto& slot = own[(q * m1 + ai) * m2 + bi];
        if (slot) throw InputError("duplicate transition " + where);
        slot = Distribution(std::move(entries));
    }
    for (StateId q = 0; q < n; ++q)
        for (std::size_t a = 0; a < m1; ++a)
            for (std::size_t b = 0; b < m2; ++b)
                if (!own[(q * m1 + a) * m2 + b])
                    throw InputError("missing transition (" + states[q] + "," + p1_actions[a] + "," +
                                     p2_actions[b] + ")");

    const std::size_t m = actions.size();
    std::vector<Distribution> delta;
    delta.reserve(n * m * m);
    for (StateId q = 0; q < n; ++q)
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) {
                auto ia = std::find(p1_actions.begin(), p1_actions.end(), actions[a]);
                auto ib = std::find(p2_actions.begin(), p2_actions.end(), actions[b]);
                std::size_t ai = ia == p1_actions.end() ? 0 : static_cast<std::size_t>(ia - p1_actions.begin());
                std::size_t bi = ib == p2_actions.end() ? 0 : static_cast<std::size_t>(ib - p2_actions.begin());
                delta.push_back(*own[(q * m1 + ai) * m2 + bi]);
            }

    StateSet target(n);
    for (const auto& s : detail::string_list(require(doc, "target"), "target"))
        target.insert(state_of(s, "target"));
    return Game(std::move(states), std::move(actions), std::move(delta), std::move(target));
}

inline Game parse_game(const std::string& text, const LoadOptions& opts = {}) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    try {
        return game_from_json(doc, opts);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed game document: ") + e.what());
    }
}

inline Game load_game(const std::string& path, const LoadOptions& opts = {}) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open \"" + path + "\"");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_game(ss.str(), opts);
}

inline Json game_to_json(const Game& g) {
    Json doc;
    doc["states"] = g.state_names();
    doc["actions"] = g.action_names();
    doc["target"] = g.names_of(g.target());
    Json trans = Json::array();
    for (StateId q = 0; q < g.num_states(); ++q)
        for (ActionId a = 0; a < g.num_actions(); ++a)
            for (ActionId b = 0; b < g.num_actions(); ++b) {
                Json t;
                t["from"] = g.state_name(q);
                t["p1"] = g.action_name(a);
                t["p2"] = g.action_name(b);
                Json to = Json::object();
                for (const auto& [s, p] : g.delta(q, a, b).entries()) to[g.state_name(s)] = p.str();
                t["to"] = std::move(to);
                trans.push_back(std::move(t));
            }
    doc["transitions"] = std::move(trans);
    return doc;
}

inline std::string serialize_game(const Game& g) { return game_to_json(g).dump(2) + "\n"; }

namespace detail {
inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\n");
    return s.substr(b, e - b + 1);
}
inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    return out;
}
}  // namespace detail

/// Parses "q1:1/2,q2:1/2".
inline Distribution parse_distribution(const Game& g, const std::string& text) {
    std::vector<Distribution::Entry> entries;
    Rational sum;
    for (const auto& item : detail::split(text, ',')) {
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos) throw InputError("expected state:probability, got \"" + item + "\"");
        auto p = Rational::parse(detail::trim(item.substr(colon + 1)));
        if (!p.is_positive()) throw InputError("non-positive probability for \"" + item + "\"");
        sum += p;
        entries.emplace_back(g.state(detail::trim(item.substr(0, colon))), p);
    }
    if (entries.empty()) throw InputError("empty distribution");
    if (!sum.is_one()) throw InputError("distribution sums to " + sum.str());
    return Distribution(std::move(entries));
}

inline std::string format_distribution(const Game& g, const Distribution& d) {
    std::string out;
    for (const auto& [q, p] : d.entries()) {
        if (!out.empty()) out += ",";
        out += g.state_name(q) + ":" + p.str();
    }
    return out;
}

/// Parses "q1,q2" into a state set.
inline StateSet parse_state_list(const Game& g, const std::string& text) {
    StateSet s(g.num_states());
    for (const auto& nm : detail::split(text, ','))
        if (!nm.empty()) s.insert(g.state(nm));
    return s;
}

}  // namespace syncgame
