#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "syncgame/errors.hpp"

namespace syncgame {

using StateId = std::size_t;
using ActionId = std::size_t;

/// Subset of a fixed universe {0..n-1}. Iteration is in increasing index order.
class StateSet {
public:
    StateSet() = default;
    explicit StateSet(std::size_t universe)
        : universe_(universe), words_((universe + 63) / 64, 0) {}
    StateSet(std::size_t universe, std::initializer_list<StateId> members) : StateSet(universe) {
        for (auto q : members) insert(q);
    }

    static StateSet full(std::size_t universe) {
        StateSet s(universe);
        for (std::size_t i = 0; i < universe; ++i) s.insert(i);
        return s;
    }
    static StateSet singleton(std::size_t universe, StateId q) { return StateSet(universe, {q}); }

    std::size_t universe() const { return universe_; }

    bool contains(StateId q) const {
        return q < universe_ && ((words_[q >> 6] >> (q & 63)) & 1u);
    }
    void insert(StateId q) {
        if (q >= universe_) throw InvariantError("state index out of range");
        words_[q >> 6] |= std::uint64_t{1} << (q & 63);
    }
    void erase(StateId q) {
        if (q < universe_) words_[q >> 6] &= ~(std::uint64_t{1} << (q & 63));
    }

    std::size_t size() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool empty() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    bool subset_of(const StateSet& o) const {
        check(o);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }
    bool intersects(const StateSet& o) const {
        check(o);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    StateSet& operator|=(const StateSet& o) {
        check(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    StateSet& operator&=(const StateSet& o) {
        check(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    StateSet& operator-=(const StateSet& o) {
        check(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }
    friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
    friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
    friend StateSet operator-(StateSet a, const StateSet& b) { return a -= b; }

    StateSet complement() const { return full(universe_) - *this; }

    friend bool operator==(const StateSet& a, const StateSet& b) {
        return a.universe_ == b.universe_ && a.words_ == b.words_;
    }
    friend bool operator!=(const StateSet& a, const StateSet& b) { return !(a == b); }

    /// Lexicographic order on the sorted member lists.
    friend bool lex_less(const StateSet& a, const StateSet& b) {
        auto va = a.members(), vb = b.members();
        return va < vb;
    }

    std::vector<StateId> members() const {
        std::vector<StateId> out;
        out.reserve(size());
        for_each([&](StateId q) { out.push_back(q); });
        return out;
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                int b = std::countr_zero(bits);
                f(static_cast<StateId>(w * 64 + static_cast<std::size_t>(b)));
                bits &= bits - 1;
            }
        }
    }

    std::size_t hash() const {
        std::size_t h = universe_ * 0x9e3779b97f4a7c15ull;
        for (auto w : words_) h = (h ^ w) * 0x100000001b3ull + (h >> 29);
        return h;
    }

    /// Low 64 members as a bitmask; valid when universe <= 64.
    std::uint64_t mask() const { return words_.empty() ? 0 : words_[0]; }

private:
    void check(const StateSet& o) const {
        if (o.universe_ != universe_) throw InvariantError("state sets over different universes");
    }

    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

struct StateSetHash {
    std::size_t operator()(const StateSet& s) const { return s.hash(); }
};

/// Descending size, then lexicographic on members.
inline bool canonical_less(const StateSet& a, const StateSet& b) {
    auto sa = a.size(), sb = b.size();
    if (sa != sb) return sa > sb;
    return lex_less(a, b);
}

/// All nonempty subsets of `s`, in canonical order.
inline std::vector<StateSet> nonempty_subsets(const StateSet& s, std::size_t cap = std::size_t{1} << 20) {
    auto m = s.members();
    if (m.size() >= 63 || (std::size_t{1} << m.size()) > cap)
        throw ResourceCapError("too many subsets to enumerate");
    std::vector<StateSet> out;
    std::uint64_t total = std::uint64_t{1} << m.size();
    out.reserve(total - 1);
    for (std::uint64_t bits = 1; bits < total; ++bits) {
        StateSet sub(s.universe());
        for (std::size_t i = 0; i < m.size(); ++i)
            if ((bits >> i) & 1u) sub.insert(m[i]);
        out.push_back(std::move(sub));
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

}  // namespace syncgame
