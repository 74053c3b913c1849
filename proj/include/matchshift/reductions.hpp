#pragma once

#include <matchshift/changes.hpp>
#include <matchshift/core.hpp>
#include <matchshift/errors.hpp>
#include <matchshift/oracle.hpp>

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace matchshift {

enum class ChangeType { Swap, Replace, Delete, Add, Mixed };

inline std::string to_string(ChangeType t)
{
    switch (t) {
    case ChangeType::Swap: return "swap";
    case ChangeType::Replace: return "replace";
    case ChangeType::Delete: return "delete";
    case ChangeType::Add: return "add";
    case ChangeType::Mixed: return "mixed";
    }
    return "?";
}

inline ChangeType change_type_from_string(const std::string & s)
{
    if (s == "swap")
        return ChangeType::Swap;
    if (s == "replace")
        return ChangeType::Replace;
    if (s == "delete")
        return ChangeType::Delete;
    if (s == "add")
        return ChangeType::Add;
    throw Error("unknown change type '" + s + "'");
}

struct ReducedInstance {
    InstancePair pair;
    ChangeType from = ChangeType::Swap, to = ChangeType::Swap;
    std::vector<std::pair<AgentId, AgentId>> agent_map;        // original -> reduced
    std::vector<std::pair<AgentId, std::string>> gadget_agents; // new agents with their derived names
    long long k_prime = 0;
};

namespace reduction_detail {

inline std::vector<AgentId> emptied_agents(const PreferenceProfile & a, const PreferenceProfile & b)
{
    std::vector<AgentId> out;
    for (int m = 0; m < a.n_left(); ++m)
        if (! a.left[m].empty() && b.left[m].empty())
            out.push_back({Side::Left, m});
    for (int w = 0; w < a.n_right(); ++w)
        if (! a.right[w].empty() && b.right[w].empty())
            out.push_back({Side::Right, w});
    return out;
}

inline std::vector<AgentId> changed_agents(const PreferenceProfile & a, const PreferenceProfile & b)
{
    std::vector<AgentId> out;
    for (int m = 0; m < a.n_left(); ++m)
        if (a.left[m] != b.left[m])
            out.push_back({Side::Left, m});
    for (int w = 0; w < a.n_right(); ++w)
        if (a.right[w] != b.right[w])
            out.push_back({Side::Right, w});
    return out;
}

inline std::string agent_name(const PreferenceProfile & p, AgentId a)
{
    const char c = a.side == Side::Left ? 'm' : (p.mode == Mode::HR ? 'h' : 'w');
    return std::string(1, c) + std::to_string(a.index + 1);
}

} // namespace reduction_detail

// How profile2 arises from profile1: exactly emptied lists (Delete), exactly
// filled-from-empty lists (Add), order changes over the same acceptable sets
// (Swap, including the no-change case), arbitrary per-agent list changes
// (Replace), or a combination (Mixed).
inline ChangeType classify_change(const PreferenceProfile & p1, const PreferenceProfile & p2)
{
    if (p1.n_left() != p2.n_left() || p1.n_right() != p2.n_right())
        throw Error("profiles are over different agent index spaces");
    auto deleted = reduction_detail::emptied_agents(p1, p2);
    auto added = reduction_detail::emptied_agents(p2, p1);
    if (deleted.empty() && added.empty()) {
        if (profile_distance(p1, p2).has_value())
            return ChangeType::Swap;
        return ChangeType::Replace;
    }
    if (! deleted.empty() && added.empty()) {
        if (change_detail::delete_agents(p1, deleted) == p2)
            return ChangeType::Delete;
        return ChangeType::Mixed;
    }
    if (! added.empty() && deleted.empty()) {
        if (change_detail::delete_agents(p2, added) == p1)
            return ChangeType::Add;
        return ChangeType::Mixed;
    }
    return ChangeType::Mixed;
}

// ---------------------------------------------------------------------------
// Swap -> Replace: a swap is a replacement; the instance itself is unchanged.

namespace reduction_detail {

inline void require_sm_pair(const InstancePair & pair)
{
    if (pair.profile1.mode != Mode::SM || pair.profile2.mode != Mode::SM)
        throw Error("change-type reductions are defined for SM instances");
}

} // namespace reduction_detail

inline ReducedInstance reduce_swap_to_replace(const InstancePair & pair)
{
    reduction_detail::require_sm_pair(pair);
    if (! profile_distance(pair.profile1, pair.profile2).has_value())
        throw WrongChangeType("profiles differ in their acceptable sets, not a Swap instance");
    ReducedInstance red;
    red.pair = pair;
    red.from = ChangeType::Swap;
    red.to = ChangeType::Replace;
    red.k_prime = pair.budget_k;
    for (int m = 0; m < pair.profile1.n_left(); ++m)
        red.agent_map.push_back({{Side::Left, m}, {Side::Left, m}});
    for (int w = 0; w < pair.profile1.n_right(); ++w)
        red.agent_map.push_back({{Side::Right, w}, {Side::Right, w}});
    return red;
}

// ---------------------------------------------------------------------------
// Delete -> Swap: two helper agents per deleted agent;
// the helper a'' performs the single swap. k' = k + 2|A_delete|.

inline ReducedInstance reduce_delete_to_swap(const InstancePair & pair)
{
    reduction_detail::require_sm_pair(pair);
    const auto cls = classify_change(pair.profile1, pair.profile2);
    if (cls != ChangeType::Delete && ! (cls == ChangeType::Swap && pair.profile1 == pair.profile2))
        throw WrongChangeType("profile2 does not arise from profile1 by deletions");
    auto deleted = reduction_detail::emptied_agents(pair.profile1, pair.profile2);

    const PreferenceProfile & p1 = pair.profile1;
    int nl = p1.n_left(), nr = p1.n_right();
    ReducedInstance red;
    red.from = ChangeType::Delete;
    red.to = ChangeType::Swap;

    // everyone keeps their P1 preferences in both reduced profiles
    PreferenceProfile q1 = p1, q2 = p1;
    std::map<std::pair<Side, int>, std::pair<int, int>> helpers; // a -> (a'' idx, a''' idx)
    for (const auto & a : deleted) {
        const Side opp = opposite(a.side);
        int idx2 = opp == Side::Left ? nl++ : nr++;  // a'' on the opposite side
        int idx3 = a.side == Side::Left ? nl++ : nr++; // a''' on a's side
        helpers[{a.side, a.index}] = {idx2, idx3};
        red.gadget_agents.push_back({{opp, idx2}, reduction_detail::agent_name(p1, a) + ".pp"});
        red.gadget_agents.push_back({{a.side, idx3}, reduction_detail::agent_name(p1, a) + ".ppp"});
    }
    q1.left.resize(nl);
    q1.right.resize(nr);
    q2.left.resize(nl);
    q2.right.resize(nr);
    q1.capacities.assign(nr, 1);
    q2.capacities.assign(nr, 1);

    Matching m1 = pair.matching1;
    for (const auto & a : deleted) {
        auto [idx2, idx3] = helpers[{a.side, a.index}];
        const Side opp = opposite(a.side);
        // a prefers a'' to everyone, in both profiles
        for (auto * q : {&q1, &q2})
            q->list_of(a.side, a.index).tie_groups.insert(q->list_of(a.side, a.index).tie_groups.begin(), TieGroup{idx2});
        // P1': a'' prefers a''' to a; P2': one swap turns this around
        q1.list_of(opp, idx2).tie_groups = {{idx3}, {a.index}};
        q2.list_of(opp, idx2).tie_groups = {{a.index}, {idx3}};
        q1.list_of(a.side, idx3).tie_groups = {{idx2}};
        q2.list_of(a.side, idx3).tie_groups = {{idx2}};
        if (a.side == Side::Left)
            m1.pairs.emplace_back(idx3, idx2);
        else
            m1.pairs.emplace_back(idx2, idx3);
    }
    m1.normalise();

    red.pair.profile1 = validate_and_normalize(q1);
    red.pair.profile2 = validate_and_normalize(q2);
    red.pair.matching1 = m1;
    red.k_prime = pair.budget_k + 2 * static_cast<long long>(deleted.size());
    red.pair.budget_k = red.k_prime;
    red.pair.budget_b = pair.budget_b;
    for (int m = 0; m < p1.n_left(); ++m)
        red.agent_map.push_back({{Side::Left, m}, {Side::Left, m}});
    for (int w = 0; w < p1.n_right(); ++w)
        red.agent_map.push_back({{Side::Right, w}, {Side::Right, w}});
    if (! is_stable(red.pair.matching1, red.pair.profile1))
        throw Error("internal: reduced matching is not stable in reduced profile1");
    return red;
}

// ---------------------------------------------------------------------------
// Add -> Delete: one helper a'' per added agent, put
// first in a's list and deleted in P2'. k' = k + |A_add|.

inline ReducedInstance reduce_add_to_delete(const InstancePair & pair)
{
    reduction_detail::require_sm_pair(pair);
    const auto cls = classify_change(pair.profile1, pair.profile2);
    if (cls != ChangeType::Add && ! (cls == ChangeType::Swap && pair.profile1 == pair.profile2))
        throw WrongChangeType("profile2 does not arise from profile1 by additions");
    auto added = reduction_detail::emptied_agents(pair.profile2, pair.profile1);

    const PreferenceProfile & p2 = pair.profile2;
    int nl = p2.n_left(), nr = p2.n_right();
    ReducedInstance red;
    red.from = ChangeType::Add;
    red.to = ChangeType::Delete;

    // everyone keeps their P2 preferences in both reduced profiles
    PreferenceProfile q1 = p2, q2 = p2;
    std::map<std::pair<Side, int>, int> helper;
    for (const auto & a : added) {
        const Side opp = opposite(a.side);
        int idx2 = opp == Side::Left ? nl++ : nr++;
        helper[{a.side, a.index}] = idx2;
        red.gadget_agents.push_back({{opp, idx2}, reduction_detail::agent_name(p2, a) + ".pp"});
    }
    q1.left.resize(nl);
    q1.right.resize(nr);
    q2.left.resize(nl);
    q2.right.resize(nr);
    q1.capacities.assign(nr, 1);
    q2.capacities.assign(nr, 1);

    Matching m1 = pair.matching1;
    for (const auto & a : added) {
        int idx2 = helper[{a.side, a.index}];
        const Side opp = opposite(a.side);
        for (auto * q : {&q1, &q2})
            q->list_of(a.side, a.index).tie_groups.insert(q->list_of(a.side, a.index).tie_groups.begin(), TieGroup{idx2});
        q1.list_of(opp, idx2).tie_groups = {{a.index}};
        q2.list_of(opp, idx2).tie_groups = {}; // a'' is deleted in P2'
        if (a.side == Side::Left)
            m1.pairs.emplace_back(a.index, idx2);
        else
            m1.pairs.emplace_back(idx2, a.index);
    }
    m1.normalise();

    red.pair.profile1 = validate_and_normalize(q1);
    red.pair.profile2 = validate_and_normalize(q2);
    red.pair.matching1 = m1;
    red.k_prime = pair.budget_k + static_cast<long long>(added.size());
    red.pair.budget_k = red.k_prime;
    red.pair.budget_b = pair.budget_b;
    for (int m = 0; m < pair.profile1.n_left(); ++m)
        red.agent_map.push_back({{Side::Left, m}, {Side::Left, m}});
    for (int w = 0; w < pair.profile1.n_right(); ++w)
        red.agent_map.push_back({{Side::Right, w}, {Side::Right, w}});
    if (! is_stable(red.pair.matching1, red.pair.profile1))
        throw Error("internal: reduced matching is not stable in reduced profile1");
    return red;
}

// ---------------------------------------------------------------------------
// Replace -> Add: per replaced agent (and M1 partner)
// a binding agent and a clone; per M1 edge inside that set a 12-agent edge
// gadget replacing the clone-clone edge. k' = k + |A*_repl| + 7 k*.

namespace reduction_detail {

// positions of the twelve gadget agents, per gadget, in creation order:
//  U side: lt_m, lb_m, rrm_m, lt_w, lb_w, rrm_w
//  W side: lm_m, rt_m, rb_m, lm_w, rt_w, rb_w
struct Gadget {
    int m, w;            // the original M1 edge
    int lt_m, lb_m, rrm_m, lt_w, lb_w, rrm_w; // left-side indices
    int lm_m, rt_m, rb_m, lm_w, rt_w, rb_w;   // right-side indices
};

} // namespace reduction_detail

inline ReducedInstance reduce_replace_to_add(const InstancePair & pair)
{
    reduction_detail::require_sm_pair(pair);
    const auto cls = classify_change(pair.profile1, pair.profile2);
    if (cls != ChangeType::Replace && cls != ChangeType::Swap)
        throw WrongChangeType("profile2 does not arise from profile1 by list replacements");
    if (! pair.profile1.all_strict() || ! pair.profile2.all_strict())
        throw TiesUnsupported("the replace-to-add gadget is implemented for strict lists");

    const PreferenceProfile & p1 = pair.profile1;
    const PreferenceProfile & p2 = pair.profile2;
    auto replaced = reduction_detail::changed_agents(p1, p2);

    // A*_repl: the replaced agents plus their M1 partners
    std::vector<char> star_left(p1.n_left(), 0), star_right(p1.n_right(), 0);
    {
        auto lp = pair.matching1.left_partner(p1.n_left());
        std::vector<int> rp(p1.n_right(), -1);
        for (auto [m, w] : pair.matching1.pairs)
            rp[w] = m;
        for (const auto & a : replaced) {
            if (a.side == Side::Left) {
                star_left[a.index] = 1;
                if (lp[a.index] >= 0)
                    star_right[lp[a.index]] = 1;
            }
            else {
                star_right[a.index] = 1;
                if (rp[a.index] >= 0)
                    star_left[rp[a.index]] = 1;
            }
        }
    }
    std::vector<AgentId> star;
    for (int m = 0; m < p1.n_left(); ++m)
        if (star_left[m])
            star.push_back({Side::Left, m});
    for (int w = 0; w < p1.n_right(); ++w)
        if (star_right[w])
            star.push_back({Side::Right, w});

    int nl = p1.n_left(), nr = p1.n_right();
    ReducedInstance red;
    red.from = ChangeType::Replace;
    red.to = ChangeType::Add;

    // indices for bindings and clones (binding on the opposite side, clone on
    // the agent's own side)
    std::map<std::pair<Side, int>, int> binding, clone;
    for (const auto & a : star) {
        int b_idx = a.side == Side::Left ? nr++ : nl++;
        int c_idx = a.side == Side::Left ? nl++ : nr++;
        binding[{a.side, a.index}] = b_idx;
        clone[{a.side, a.index}] = c_idx;
        red.gadget_agents.push_back({{opposite(a.side), b_idx}, reduction_detail::agent_name(p1, a) + ".b"});
        red.gadget_agents.push_back({{a.side, c_idx}, reduction_detail::agent_name(p1, a) + ".c"});
    }

    // gadgets, one per M1 edge inside A*_repl, oriented by the man's side
    std::vector<reduction_detail::Gadget> gadgets;
    for (auto [m, w] : pair.matching1.pairs)
        if (star_left[m] && star_right[w]) {
            reduction_detail::Gadget g;
            g.m = m;
            g.w = w;
            g.lt_m = nl++; g.lb_m = nl++; g.rrm_m = nl++;
            g.lt_w = nl++; g.lb_w = nl++; g.rrm_w = nl++;
            g.lm_m = nr++; g.rt_m = nr++; g.rb_m = nr++;
            g.lm_w = nr++; g.rt_w = nr++; g.rb_w = nr++;
            const std::string mn = reduction_detail::agent_name(p1, {Side::Left, m});
            const std::string wn = reduction_detail::agent_name(p1, {Side::Right, w});
            red.gadget_agents.push_back({{Side::Left, g.lt_m}, mn + ".lt"});
            red.gadget_agents.push_back({{Side::Left, g.lb_m}, mn + ".lb"});
            red.gadget_agents.push_back({{Side::Left, g.rrm_m}, mn + ".rrm"});
            red.gadget_agents.push_back({{Side::Left, g.lt_w}, wn + ".lt"});
            red.gadget_agents.push_back({{Side::Left, g.lb_w}, wn + ".lb"});
            red.gadget_agents.push_back({{Side::Left, g.rrm_w}, wn + ".rrm"});
            red.gadget_agents.push_back({{Side::Right, g.lm_m}, mn + ".lm"});
            red.gadget_agents.push_back({{Side::Right, g.rt_m}, mn + ".rt"});
            red.gadget_agents.push_back({{Side::Right, g.rb_m}, mn + ".rb"});
            red.gadget_agents.push_back({{Side::Right, g.lm_w}, wn + ".lm"});
            red.gadget_agents.push_back({{Side::Right, g.rt_w}, wn + ".rt"});
            red.gadget_agents.push_back({{Side::Right, g.rb_w}, wn + ".rb"});
            gadgets.push_back(g);
        }
    const long long k_star = static_cast<long long>(gadgets.size());

    PreferenceProfile q1 = PreferenceProfile::sm(nl, nr);
    PreferenceProfile q2 = PreferenceProfile::sm(nl, nr);

    // a strict order with every A*_repl member preceded by its clone, and the
    // binding agent of the list owner (if any) prepended
    auto transformed = [&](const PreferenceList & base, Side entries_side, int owner_binding) {
        std::vector<int> order;
        if (owner_binding >= 0)
            order.push_back(owner_binding);
        for (int x : base.flatten()) {
            auto it = clone.find({entries_side, x});
            if (it != clone.end())
                order.push_back(it->second);
            order.push_back(x);
        }
        return PreferenceList::strict_order(order);
    };

    for (int m = 0; m < p1.n_left(); ++m) {
        int b = star_left[m] ? binding[{Side::Left, m}] : -1;
        q1.left[m] = transformed(p1.left[m], Side::Right, b);
        q2.left[m] = q1.left[m];
    }
    for (int w = 0; w < p1.n_right(); ++w) {
        int b = star_right[w] ? binding[{Side::Right, w}] : -1;
        q1.right[w] = transformed(p1.right[w], Side::Left, b);
        q2.right[w] = q1.right[w];
    }

    // clones: empty in P1', the replaced agent's P2 list in P2' (with clone
    // insertions); bindings: empty in P1', only the original in P2'
    for (const auto & a : star) {
        int c = clone[{a.side, a.index}];
        q2.list_of(a.side, c) = transformed(p2.list_of(a.side, a.index), opposite(a.side), -1);
        int b = binding[{a.side, a.index}];
        q2.list_of(opposite(a.side), b).tie_groups = {{a.index}};
    }

    // edge gadgets: splice the gadget ends into the two clone lists and lay
    // down the twelve fixed preference lists
    auto splice = [&](PreferenceList & list, int clone_of_partner, int partner, int gadget_agent) {
        std::vector<int> order;
        bool replaced_entry = false;
        auto flat = list.flatten();
        for (std::size_t i = 0; i < flat.size(); ++i) {
            if (flat[i] == clone_of_partner && i + 1 < flat.size() && flat[i + 1] == partner) {
                order.push_back(gadget_agent);
                ++i;
                replaced_entry = true;
            }
            else
                order.push_back(flat[i]);
        }
        if (! replaced_entry)
            order.push_back(gadget_agent); // partner no longer acceptable: append last
        list = PreferenceList::strict_order(order);
    };

    for (const auto & g : gadgets) {
        int c_m = clone[{Side::Left, g.m}], c_w = clone[{Side::Right, g.w}];
        splice(q2.left[c_m], clone[{Side::Right, g.w}], g.w, g.lm_m);
        splice(q2.right[c_w], clone[{Side::Left, g.m}], g.m, g.rrm_w);

        auto set = [&](PreferenceProfile & q, Side side, int idx, std::vector<int> order) {
            q.list_of(side, idx) = PreferenceList::strict_order(std::move(order));
        };
        // left half (subscript m)
        set(q2, Side::Right, g.lm_m, {g.lt_m, c_m, g.lb_m});
        set(q2, Side::Left, g.lt_m, {g.rt_m, g.lm_m});
        set(q2, Side::Left, g.lb_m, {g.lm_m, g.rb_m});
        set(q2, Side::Right, g.rt_m, {g.rrm_m, g.lt_m});
        set(q2, Side::Right, g.rb_m, {g.lb_m, g.rrm_m});
        set(q2, Side::Left, g.rrm_m, {g.rb_m, g.lm_w, g.rt_m});
        // right half (subscript w)
        set(q2, Side::Right, g.lm_w, {g.lt_w, g.rrm_m, g.lb_w});
        set(q2, Side::Left, g.lt_w, {g.rt_w, g.lm_w});
        set(q2, Side::Left, g.lb_w, {g.lm_w, g.rb_w});
        set(q2, Side::Right, g.rt_w, {g.rrm_w, g.lt_w});
        set(q2, Side::Right, g.rb_w, {g.lb_w, g.rrm_w});
        set(q2, Side::Left, g.rrm_w, {g.rb_w, c_w, g.rt_w});
        // the two bridge agents keep their lists in P1' as well
        set(q1, Side::Left, g.rrm_m, {g.rb_m, g.lm_w, g.rt_m});
        set(q1, Side::Right, g.lm_w, {g.lt_w, g.rrm_m, g.lb_w});
    }

    Matching m1 = pair.matching1;
    for (const auto & g : gadgets)
        m1.pairs.emplace_back(g.rrm_m, g.lm_w);
    m1.normalise();

    red.pair.profile1 = validate_and_normalize(q1);
    red.pair.profile2 = validate_and_normalize(q2);
    red.pair.matching1 = m1;
    red.k_prime = pair.budget_k + static_cast<long long>(star.size()) + 7 * k_star;
    red.pair.budget_k = red.k_prime;
    red.pair.budget_b = pair.budget_b;
    for (int m = 0; m < p1.n_left(); ++m)
        red.agent_map.push_back({{Side::Left, m}, {Side::Left, m}});
    for (int w = 0; w < p1.n_right(); ++w)
        red.agent_map.push_back({{Side::Right, w}, {Side::Right, w}});
    if (! is_stable(red.pair.matching1, red.pair.profile1))
        throw Error("internal: reduced matching is not stable in reduced profile1");
    return red;
}

// ---------------------------------------------------------------------------
// Reduction verifier: compares the oracle's yes/no answers on the original
// and reduced instances across a k sweep, shifting k by the reduction offset.

struct ReductionReport {
    long long offset = 0;
    long long min_delta_original = 0;
    long long min_delta_reduced = 0;
    struct Row {
        long long k;
        bool yes_original;
        bool yes_reduced;
    };
    std::vector<Row> rows;
    int mismatches = 0;
};

inline ReductionReport verify_reduction(const InstancePair & pair, const ReducedInstance & reduced,
                                        long long k_from, long long k_to,
                                        int max_agents_original = 14, int max_agents_reduced = 30)
{
    if (pair.profile2.n_agents() > max_agents_original)
        throw OracleTooLarge("original instance too large for the oracle");
    if (reduced.pair.profile2.n_agents() > max_agents_reduced)
        throw OracleTooLarge("reduced instance too large for the oracle");

    ReductionReport report;
    report.offset = reduced.k_prime - pair.budget_k;
    report.min_delta_original = oracle_ism(pair, Objective::Minimize, max_agents_original);
    report.min_delta_reduced = oracle_ism(reduced.pair, Objective::Minimize, max_agents_reduced);
    for (long long k = k_from; k <= k_to; ++k) {
        ReductionReport::Row row;
        row.k = k;
        row.yes_original = report.min_delta_original <= k;
        row.yes_reduced = report.min_delta_reduced <= k + report.offset;
        if (row.yes_original != row.yes_reduced)
            ++report.mismatches;
        report.rows.push_back(row);
    }
    return report;
}

// Composes the directed reduction steps (swap->replace->add->delete->swap)
// until the requested change type is reached.
inline ReducedInstance reduce_change_type(const InstancePair & pair, ChangeType from, ChangeType to)
{
    auto step = [](const InstancePair & p, ChangeType f) -> ReducedInstance {
        switch (f) {
        case ChangeType::Swap: return reduce_swap_to_replace(p);
        case ChangeType::Replace: return reduce_replace_to_add(p);
        case ChangeType::Add: return reduce_add_to_delete(p);
        case ChangeType::Delete: return reduce_delete_to_swap(p);
        default: throw WrongChangeType("cannot reduce a mixed instance");
        }
    };
    ReducedInstance current;
    current.pair = pair;
    current.from = from;
    current.to = from;
    current.k_prime = pair.budget_k;
    int guard = 0;
    while (current.to != to) {
        if (++guard > 4)
            throw Error("reduction cycle failed to reach the requested type");
        ReducedInstance next = step(current.pair, current.to);
        next.from = from;
        current.pair = next.pair;
        current.to = next.to;
        current.k_prime = next.k_prime;
        current.gadget_agents.insert(current.gadget_agents.end(), next.gadget_agents.begin(), next.gadget_agents.end());
        current.agent_map = next.agent_map;
    }
    return current;
}

} // namespace matchshift
