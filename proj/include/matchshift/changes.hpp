#pragma once

#include <matchshift/core.hpp>
#include <matchshift/errors.hpp>
#include <matchshift/io.hpp>
#include <matchshift/rng.hpp>
#include <matchshift/sampling.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace matchshift {

enum class ChangeKind { Reorder, ReorderInverse, Delete, Swaps, Add };

inline std::string to_string(ChangeKind k)
{
    switch (k) {
    case ChangeKind::Reorder: return "reorder";
    case ChangeKind::ReorderInverse: return "reorder-inv";
    case ChangeKind::Delete: return "delete";
    case ChangeKind::Swaps: return "swaps";
    case ChangeKind::Add: return "add";
    }
    return "?";
}

inline ChangeKind change_kind_from_string(const std::string & s)
{
    if (s == "reorder")
        return ChangeKind::Reorder;
    if (s == "reorder-inv" || s == "reorder-inverse")
        return ChangeKind::ReorderInverse;
    if (s == "delete")
        return ChangeKind::Delete;
    if (s == "swaps" || s == "swap")
        return ChangeKind::Swaps;
    if (s == "add")
        return ChangeKind::Add;
    throw Error("unknown change kind '" + s + "'");
}

// One agent-level edit. For Add, `agent` is the new agent's final id, the
// list is its complete preference order and `insertions` records where it
// enters every pre-existing opposite-side list.
struct AgentEdit {
    AgentId agent;
    PreferenceList new_list;
    std::vector<std::pair<int, int>> insertions; // (opposite index, position)
};

struct ChangeScript {
    ChangeKind kind = ChangeKind::Reorder;
    double fraction_r = 0;
    std::uint64_t seed = 0;
    std::uint64_t source_fingerprint = 0;
    std::vector<AgentEdit> affected;
};

inline long long round_half_up(double x)
{
    return static_cast<long long>(std::floor(x + 0.5));
}

namespace change_detail {

inline std::vector<AgentId> all_agents(const PreferenceProfile & p)
{
    std::vector<AgentId> out;
    for (int m = 0; m < p.n_left(); ++m)
        out.push_back({Side::Left, m});
    for (int w = 0; w < p.n_right(); ++w)
        out.push_back({Side::Right, w});
    return out;
}

// first `count` entries of a uniform random permutation, returned sorted
inline std::vector<AgentId> pick_agents(const PreferenceProfile & p, long long count, Rng & rng)
{
    auto pool = all_agents(p);
    const std::size_t n = pool.size();
    count = std::min<long long>(count, static_cast<long long>(n));
    for (long long i = 0; i < count; ++i) {
        std::size_t j = i + rng.below(n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
}

inline PreferenceProfile delete_agents(const PreferenceProfile & p, const std::vector<AgentId> & removed)
{
    PreferenceProfile out = p;
    std::vector<char> gone_left(p.n_left(), 0), gone_right(p.n_right(), 0);
    for (const auto & a : removed)
        (a.side == Side::Left ? gone_left : gone_right)[a.index] = 1;
    for (const auto & a : removed)
        out.list_of(a.side, a.index).tie_groups.clear();
    auto strip = [](std::vector<PreferenceList> & lists, const std::vector<char> & gone) {
        for (auto & l : lists) {
            for (auto & g : l.tie_groups)
                g.erase(std::remove_if(g.begin(), g.end(), [&](int x) { return gone[x]; }), g.end());
            l.tie_groups.erase(std::remove_if(l.tie_groups.begin(), l.tie_groups.end(),
                                              [](const TieGroup & g) { return g.empty(); }),
                               l.tie_groups.end());
        }
    };
    strip(out.left, gone_right);
    strip(out.right, gone_left);
    return validate_and_normalize(out);
}

} // namespace change_detail

// Applies an r-fraction of changes of the given kind to a strict profile and
// returns the changed profile together with a script that reproduces it.
inline std::pair<PreferenceProfile, ChangeScript> apply_changes(const PreferenceProfile & profile, ChangeKind kind,
                                                                double fraction_r, std::uint64_t seed)
{
    if (fraction_r < 0 || fraction_r > 1)
        throw FractionOutOfRange("change fraction must lie in [0,1]");
    if (! profile.all_strict())
        throw TiesUnsupported("change operators expect strict preference lists");
    if (profile.mode != Mode::SM)
        throw Error("change operators are defined for SM profiles");

    Rng rng(seed);
    ChangeScript script;
    script.kind = kind;
    script.fraction_r = fraction_r;
    script.seed = seed;
    script.source_fingerprint = profile_fingerprint(profile);

    PreferenceProfile p2 = profile;

    switch (kind) {
    case ChangeKind::Reorder:
    case ChangeKind::ReorderInverse: {
        const long long count = round_half_up(fraction_r * profile.n_agents());
        for (const auto & a : change_detail::pick_agents(profile, count, rng)) {
            auto order = profile.list_of(a.side, a.index).flatten();
            if (kind == ChangeKind::Reorder)
                rng.shuffle(order);
            else
                std::reverse(order.begin(), order.end());
            AgentEdit edit;
            edit.agent = a;
            edit.new_list = PreferenceList::strict_order(order);
            p2.list_of(a.side, a.index) = edit.new_list;
            script.affected.push_back(std::move(edit));
        }
        p2 = validate_and_normalize(p2);
        break;
    }
    case ChangeKind::Delete: {
        const long long count = round_half_up(fraction_r * profile.n_agents());
        auto victims = change_detail::pick_agents(profile, count, rng);
        for (const auto & a : victims) {
            AgentEdit edit;
            edit.agent = a;
            script.affected.push_back(std::move(edit));
        }
        p2 = change_detail::delete_agents(profile, victims);
        break;
    }
    case ChangeKind::Swaps: {
        // the same number of swaps in every list, each list resampled
        // uniformly at its exact target distance
        auto perturb = [&](Side side, int idx) {
            auto order = profile.list_of(side, idx).flatten();
            const long long L = static_cast<long long>(order.size());
            const long long d = round_half_up(fraction_r * (L * (L - 1) / 2));
            AgentEdit edit;
            edit.agent = {side, idx};
            edit.new_list = PreferenceList::strict_order(sample_at_swap_distance(order, d, rng));
            p2.list_of(side, idx) = edit.new_list;
            script.affected.push_back(std::move(edit));
        };
        for (int m = 0; m < profile.n_left(); ++m)
            perturb(Side::Left, m);
        for (int w = 0; w < profile.n_right(); ++w)
            perturb(Side::Right, w);
        p2 = validate_and_normalize(p2);
        break;
    }
    case ChangeKind::Add: {
        const long long count = round_half_up(fraction_r * profile.n_agents());
        for (long long i = 0; i < count; ++i) {
            const Side side = (i % 2 == 0) ? Side::Left : Side::Right;
            auto & own_side_2 = side == Side::Left ? p2.left : p2.right;
            auto & opp_side_2 = side == Side::Left ? p2.right : p2.left;
            const int new_index = static_cast<int>(own_side_2.size());

            AgentEdit edit;
            edit.agent = {side, new_index};
            edit.new_list = PreferenceList::strict_order(random_order(static_cast<int>(opp_side_2.size()), rng));
            for (int o = 0; o < static_cast<int>(opp_side_2.size()); ++o) {
                auto flat = opp_side_2[o].flatten();
                int pos = static_cast<int>(rng.below(flat.size() + 1));
                flat.insert(flat.begin() + pos, new_index);
                opp_side_2[o] = PreferenceList::strict_order(flat);
                edit.insertions.emplace_back(o, pos);
            }
            own_side_2.push_back(edit.new_list);
            if (side == Side::Right)
                p2.capacities.push_back(1);
            script.affected.push_back(std::move(edit));
        }
        // pair P2 with extend_for_add(profile, script): the added agents
        // carry empty lists in P1 by convention
        p2 = validate_and_normalize(p2);
        break;
    }
    }
    return {p2, script};
}

// The profile1 matching an Add change: the original profile extended with
// the added agents carrying empty lists.
inline PreferenceProfile extend_for_add(const PreferenceProfile & profile, const ChangeScript & script)
{
    PreferenceProfile p1 = profile;
    if (script.kind != ChangeKind::Add)
        return p1;
    for (const auto & edit : script.affected) {
        if (edit.agent.side == Side::Left)
            p1.left.push_back(PreferenceList{});
        else {
            p1.right.push_back(PreferenceList{});
            p1.capacities.push_back(1);
        }
    }
    return p1;
}

// Deterministic reproduction of P2 from the recorded script.
inline PreferenceProfile replay(const PreferenceProfile & profile, const ChangeScript & script)
{
    if (profile_fingerprint(profile) != script.source_fingerprint)
        throw ScriptMismatch("script was recorded against a different profile");

    PreferenceProfile p2 = profile;
    switch (script.kind) {
    case ChangeKind::Reorder:
    case ChangeKind::ReorderInverse:
    case ChangeKind::Swaps:
        for (const auto & edit : script.affected)
            p2.list_of(edit.agent.side, edit.agent.index) = edit.new_list;
        return validate_and_normalize(p2);
    case ChangeKind::Delete: {
        std::vector<AgentId> victims;
        for (const auto & edit : script.affected)
            victims.push_back(edit.agent);
        return change_detail::delete_agents(profile, victims);
    }
    case ChangeKind::Add: {
        for (const auto & edit : script.affected) {
            auto & own = edit.agent.side == Side::Left ? p2.left : p2.right;
            auto & opp = edit.agent.side == Side::Left ? p2.right : p2.left;
            if (static_cast<int>(own.size()) != edit.agent.index)
                throw ScriptMismatch("recorded Add index does not fit the profile");
            for (auto [o, pos] : edit.insertions) {
                auto flat = opp.at(o).flatten();
                if (pos > static_cast<int>(flat.size()))
                    throw ScriptMismatch("recorded insertion position out of range");
                flat.insert(flat.begin() + pos, edit.agent.index);
                opp[o] = PreferenceList::strict_order(flat);
            }
            own.push_back(edit.new_list);
            if (edit.agent.side == Side::Right)
                p2.capacities.push_back(1);
        }
        return validate_and_normalize(p2);
    }
    }
    throw Error("unreachable");
}

} // namespace matchshift
