#pragma once

#include <matchshift/core.hpp>
#include <matchshift/errors.hpp>

#include <algorithm>
#include <limits>
#include <vector>

namespace matchshift {

// Brute-force ground truth for small instances. Works with ties (weak
// stability) and hospital quotas. Every optimised solver in this project is
// validated against these.

namespace oracle_detail {

struct Enumerator {
    const PreferenceProfile & p;
    RankTable ranks;
    int nl, nr;
    int unmatched_rank;
    std::vector<std::vector<int>> left_options; // acceptable partners per left agent
    std::vector<int> assign;                    // left -> right or -1
    std::vector<std::vector<int>> taken;        // right -> matched left agents
    std::vector<Matching> found;

    explicit Enumerator(const PreferenceProfile & profile)
        : p(profile), ranks(profile), nl(profile.n_left()), nr(profile.n_right()),
          unmatched_rank(std::max(nl, nr) + 1)
    {
        left_options.resize(nl);
        for (int m = 0; m < nl; ++m)
            for (const auto & g : p.left[m].tie_groups)
                for (int w : g)
                    if (ranks.right[w][m] >= 0)
                        left_options[m].push_back(w);
        assign.assign(nl, -1);
        taken.resize(nr);
    }

    // Can hospital w still end up fully subscribed with residents it weakly
    // prefers to m? If not, a decided man m preferring w is blocked for good.
    bool pair_can_be_saved(int m, int w, int decided_upto) const
    {
        const int rm = ranks.right[w][m];
        int candidates = 0;
        for (int r : taken[w]) {
            if (ranks.right[w][r] > rm)
                return false; // already holds someone strictly worse than m
            ++candidates;
        }
        if (candidates >= p.capacity(w))
            return true;
        for (int r = decided_upto; r < nl; ++r)
            if (ranks.right[w][r] >= 0 && ranks.right[w][r] <= rm && ranks.left[r][w] >= 0)
                if (++candidates >= p.capacity(w))
                    return true;
        return false;
    }

    // Does the decided prefix already force a blocking pair no future
    // assignment can destroy?
    bool prefix_doomed(int decided_upto) const
    {
        for (int m = 0; m < decided_upto; ++m) {
            const int have = assign[m] < 0 ? unmatched_rank : ranks.left[m][assign[m]];
            for (int w : left_options[m]) {
                if (ranks.left[m][w] >= have)
                    continue;
                if (! pair_can_be_saved(m, w, decided_upto))
                    return true;
            }
        }
        return false;
    }

    bool leaf_is_stable() const
    {
        for (int m = 0; m < nl; ++m) {
            const int have = assign[m] < 0 ? unmatched_rank : ranks.left[m][assign[m]];
            for (int w : left_options[m]) {
                if (ranks.left[m][w] >= have)
                    continue;
                if (static_cast<int>(taken[w].size()) < p.capacity(w))
                    return false;
                for (int r : taken[w])
                    if (ranks.right[w][r] > ranks.right[w][m])
                        return false;
            }
        }
        return true;
    }

    void dfs(int m)
    {
        if (m == nl) {
            if (leaf_is_stable()) {
                Matching out;
                for (int i = 0; i < nl; ++i)
                    if (assign[i] >= 0)
                        out.pairs.emplace_back(i, assign[i]);
                out.normalise();
                found.push_back(std::move(out));
            }
            return;
        }
        // incremental doom check only looks at the newly decided agent plus
        // hospitals whose pool shrank; a full prefix check is cheap enough
        // at oracle sizes and simpler to trust
        for (int w : left_options[m]) {
            if (static_cast<int>(taken[w].size()) >= p.capacity(w))
                continue;
            assign[m] = w;
            taken[w].push_back(m);
            if (! prefix_doomed(m + 1))
                dfs(m + 1);
            taken[w].pop_back();
            assign[m] = -1;
        }
        assign[m] = -1;
        if (! prefix_doomed(m + 1))
            dfs(m + 1);
    }
};

} // namespace oracle_detail

// All (weakly) stable matchings of a profile, exhaustively.
inline std::vector<Matching> enumerate_stable_matchings(const PreferenceProfile & p, int max_agents = 14)
{
    if (p.n_agents() > max_agents)
        throw InstanceTooLarge("instance has " + std::to_string(p.n_agents()) + " agents, oracle cap is " + std::to_string(max_agents));
    oracle_detail::Enumerator e(p);
    e.dfs(0);
    std::sort(e.found.begin(), e.found.end(), [](const Matching & a, const Matching & b) { return a.pairs < b.pairs; });
    return e.found;
}

enum class Objective { Minimize, Maximize };

// min / max |M1 (triangle) M| over the stable matchings of profile2.
inline long long oracle_ism(const InstancePair & pair, Objective objective, int max_agents = 14)
{
    auto all = enumerate_stable_matchings(pair.profile2, max_agents);
    if (all.empty())
        throw Error("profile2 admits no stable matching");
    long long best = objective == Objective::Minimize ? std::numeric_limits<long long>::max() : -1;
    for (const auto & m : all) {
        long long d = symmetric_difference_count(pair.matching1, m);
        if (objective == Objective::Minimize)
            best = std::min(best, d);
        else
            best = std::max(best, d);
    }
    return best;
}

// For every blocker budget 0..max_b, the minimum |M1 (triangle) M| over all
// matchings of profile2 (not only stable ones) with at most that many
// blocking pairs. One exhaustive sweep serves all budgets.
inline std::vector<long long> oracle_iasm_counts(const InstancePair & pair, int max_b, int max_agents = 12)
{
    const PreferenceProfile & p = pair.profile2;
    if (p.n_agents() > max_agents)
        throw InstanceTooLarge("IASM oracle cap exceeded");
    if (p.mode != Mode::SM)
        throw Error("IASM oracle expects an SM profile");
    RankTable ranks(p);
    const int nl = p.n_left(), nr = p.n_right();
    const int unmatched_rank = std::max(nl, nr) + 1;

    std::vector<std::vector<int>> options(nl);
    for (int m = 0; m < nl; ++m)
        for (const auto & g : p.left[m].tie_groups)
            for (int w : g)
                if (ranks.right[w][m] >= 0)
                    options[m].push_back(w);

    auto m1_left = pair.matching1.left_partner(nl);
    std::vector<int> assign(nl, -1), taken(nr, -1);
    std::vector<long long> best(static_cast<std::size_t>(max_b) + 1, std::numeric_limits<long long>::max());

    auto leaf = [&]() {
        int blockers = 0;
        for (int m = 0; m < nl; ++m) {
            const int have = assign[m] < 0 ? unmatched_rank : ranks.left[m][assign[m]];
            for (int w : options[m]) {
                if (ranks.left[m][w] >= have)
                    continue;
                const int w_have = taken[w] < 0 ? unmatched_rank : ranks.right[w][taken[w]];
                if (ranks.right[w][m] < w_have)
                    ++blockers;
            }
        }
        long long delta = 0;
        for (int m = 0; m < nl; ++m) {
            if (m1_left.size() > static_cast<std::size_t>(m) && m1_left[m] >= 0 && assign[m] != m1_left[m])
                ++delta;
            if (assign[m] >= 0 && (static_cast<std::size_t>(m) >= m1_left.size() || assign[m] != m1_left[m]))
                ++delta;
        }
        if (blockers <= max_b)
            for (int b = blockers; b <= max_b; ++b)
                best[b] = std::min(best[b], delta);
    };

    auto dfs = [&](auto && self, int m) -> void {
        if (m == nl) {
            leaf();
            return;
        }
        for (int w : options[m]) {
            if (taken[w] >= 0)
                continue;
            assign[m] = w;
            taken[w] = m;
            self(self, m + 1);
            taken[w] = -1;
        }
        assign[m] = -1;
        self(self, m + 1);
    };
    dfs(dfs, 0);
    return best;
}

inline long long oracle_iasm(const InstancePair & pair, int max_agents = 12)
{
    int b = static_cast<int>(std::min<long long>(pair.budget_b, 1 << 20));
    return oracle_iasm_counts(pair, b, max_agents).back();
}

// IHR(-T) oracle: prunes every resident's list to the M1 partner plus the
// tie-closed first-n positions, then enumerates stable matchings.
inline long long oracle_ihrt(const InstancePair & pair, int max_residents = 7)
{
    const PreferenceProfile & p2 = pair.profile2;
    if (p2.n_left() > max_residents)
        throw InstanceTooLarge("IHR oracle resident cap exceeded");

    auto m1_left = pair.matching1.left_partner(p2.n_left());
    const int n = p2.n_left();
    PreferenceProfile pruned = p2;
    for (int r = 0; r < n; ++r) {
        PreferenceList kept;
        int positions = 0;
        for (const auto & g : pruned.left[r].tie_groups) {
            if (positions >= n) {
                // past the cut: keep only the M1 partner, in place
                TieGroup ng;
                for (int h : g)
                    if (h == m1_left[r])
                        ng.push_back(h);
                if (! ng.empty())
                    kept.tie_groups.push_back(std::move(ng));
            }
            else
                kept.tie_groups.push_back(g);
            positions += static_cast<int>(g.size());
        }
        pruned.left[r] = std::move(kept);
    }
    pruned = validate_and_normalize(pruned);

    auto all = enumerate_stable_matchings(pruned, pruned.n_agents() + 1);
    if (all.empty())
        throw Error("no stable matching in the pruned IHR search space");
    long long best = std::numeric_limits<long long>::max();
    for (const auto & m : all)
        best = std::min(best, symmetric_difference_count(pair.matching1, m));
    return best;
}

} // namespace matchshift
