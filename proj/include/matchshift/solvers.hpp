#pragma once

#include <matchshift/core.hpp>
#include <matchshift/errors.hpp>
#include <matchshift/gale_shapley.hpp>
#include <matchshift/oracle.hpp>
#include <matchshift/rotations.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

namespace matchshift {

enum class SolveStatus { Optimal, BudgetExceeded, NoSolutionWithinK };

struct IncrementalResult {
    Matching matching;
    long long count = 0;
    std::vector<std::pair<int, int>> blockers;
    SolveStatus status = SolveStatus::Optimal;
    long long nodes = 0;
};

// --------------------------------------------------------------------------
// ISM: a stable matching of profile2 with minimum (or maximum) symmetric
// difference to matching1. Weight +1 (resp. -1) on matching1 edges, then one
// maximum-weight stable matching computation.

inline IncrementalResult solve_ism(const InstancePair & pair, Objective objective)
{
    const PreferenceProfile & p2 = pair.profile2;
    detail::require_strict_sm(p2);
    RankTable ranks(p2);
    EdgeWeights w(p2.n_left(), p2.n_right());
    for (auto [m, ww] : pair.matching1.pairs)
        if (m < p2.n_left() && ww < p2.n_right() && ranks.mutually_acceptable(m, ww))
            w.weight[m][ww] = objective == Objective::Minimize ? 1 : -1;

    auto res = max_weight_stable_matching_full(p2, w);
    IncrementalResult out;
    out.matching = res.matching;
    out.count = symmetric_difference_count(pair.matching1, res.matching);
    return out;
}

// --------------------------------------------------------------------------
// IHR: clone every hospital into quota-many ranked copies, lift matching1
// edges to weight-2 edges on every copy, solve max-weight stable marriage on
// the cloned instance and project back.

inline IncrementalResult solve_ihr(const InstancePair & pair)
{
    const PreferenceProfile & p2 = pair.profile2;
    if (p2.mode != Mode::HR)
        throw Error("solve_ihr expects an HR instance");
    if (! p2.all_strict())
        throw TiesUnsupported("solve_ihr needs strict preference lists");

    const int nr = p2.n_left();
    std::vector<int> clone_base(p2.n_right() + 1, 0);
    for (int h = 0; h < p2.n_right(); ++h)
        clone_base[h + 1] = clone_base[h] + p2.capacity(h);
    const int n_clones = clone_base[p2.n_right()];

    PreferenceProfile cloned = PreferenceProfile::sm(nr, n_clones);
    for (int r = 0; r < nr; ++r) {
        std::vector<int> order;
        for (int h : p2.left[r].flatten())
            for (int c = clone_base[h]; c < clone_base[h + 1]; ++c)
                order.push_back(c);
        cloned.left[r] = PreferenceList::strict_order(order);
    }
    for (int h = 0; h < p2.n_right(); ++h) {
        auto lst = PreferenceList::strict_order(p2.right[h].flatten());
        for (int c = clone_base[h]; c < clone_base[h + 1]; ++c)
            cloned.right[c] = lst;
    }

    RankTable ranks(p2);
    EdgeWeights w(nr, n_clones);
    for (auto [r, h] : pair.matching1.pairs)
        if (ranks.mutually_acceptable(r, h))
            for (int c = clone_base[h]; c < clone_base[h + 1]; ++c)
                w.weight[r][c] = 2;

    auto res = max_weight_stable_matching_full(cloned, w);

    // project clones back to their hospitals
    std::vector<int> clone_owner(n_clones);
    for (int h = 0; h < p2.n_right(); ++h)
        for (int c = clone_base[h]; c < clone_base[h + 1]; ++c)
            clone_owner[c] = h;
    IncrementalResult out;
    for (auto [r, c] : res.matching.pairs)
        out.matching.pairs.emplace_back(r, clone_owner[c]);
    out.matching.normalise();
    out.count = symmetric_difference_count(pair.matching1, out.matching);
    return out;
}

// --------------------------------------------------------------------------
// IASM, exact: depth-first branch and bound over left-agent assignments.
// Prunes on (i) blocking pairs already forced among decided agents and
// (ii) an admissible lower bound on the final symmetric difference.

namespace iasm_detail {

struct BranchAndBound {
    const PreferenceProfile & p;
    const Matching & m1;
    RankTable ranks;
    int nl, nr;
    long long b;
    long long node_limit;

    std::vector<int> order;                   // men by descending degree
    std::vector<std::vector<int>> values;     // per man: candidate women, value-ordered
    std::vector<std::vector<int>> acc_of_w;   // acceptable men per woman
    std::vector<int> m1p;                     // man -> M1 partner acceptable in p, else -1
    std::vector<int> m1_of_w;                 // woman -> her M1 man if that edge is acceptable
    long long base_delta = 0;                 // M1 edges that cannot exist in p at all

    std::vector<int> assign;                  // man -> woman, -1 unmatched, -2 undecided
    std::vector<int> taken;                   // woman -> man or -1
    std::vector<char> decided;
    std::vector<char> doomed;                 // undecided man whose M1 partner is gone
    long long forced_blockers = 0, decided_delta = 0, doom_count = 0;

    long long best_count = std::numeric_limits<long long>::max();
    std::vector<int> best_assign;
    long long nodes = 0;
    bool exceeded = false;

    BranchAndBound(const PreferenceProfile & profile, const Matching & matching1, long long budget_b, long long limit)
        : p(profile), m1(matching1), ranks(profile), nl(profile.n_left()), nr(profile.n_right()),
          b(budget_b), node_limit(limit)
    {
        values.resize(nl);
        acc_of_w.resize(nr);
        m1p.assign(nl, -1);
        m1_of_w.assign(nr, -1);
        for (auto [m, w] : m1.pairs) {
            if (m < nl && w < nr && ranks.mutually_acceptable(m, w)) {
                m1p[m] = w;
                m1_of_w[w] = m;
            }
            else
                ++base_delta; // lost in every M2
        }
        for (int m = 0; m < nl; ++m) {
            std::vector<int> vals;
            if (m1p[m] >= 0)
                vals.push_back(m1p[m]);
            for (int w : p.left[m].flatten())
                if (ranks.right[w][m] >= 0 && w != m1p[m]) {
                    vals.push_back(w);
                    acc_of_w[w].push_back(m);
                }
            if (m1p[m] >= 0)
                acc_of_w[m1p[m]].push_back(m);
            values[m] = std::move(vals);
        }
        order.resize(nl);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int c) { return values[a].size() > values[c].size(); });
        assign.assign(nl, -2);
        taken.assign(nr, -1);
        decided.assign(nl, 0);
        doomed.assign(nl, 0);
    }

    bool better_for_w(int w, int m, int than) const
    {
        const int r_than = than < 0 ? std::numeric_limits<int>::max() : ranks.right[w][than];
        return ranks.right[w][m] < r_than;
    }

    bool prefers(int m, int w, int over) const
    {
        const int r_over = over < 0 ? std::numeric_limits<int>::max() : ranks.left[m][over];
        return ranks.left[m][w] < r_over;
    }

    // blocking pairs forced by deciding m := w (or w = -1)
    long long new_forced(int m, int w) const
    {
        long long f = 0;
        for (int w2 : p.left[m].flatten()) {
            if (w2 == w || ranks.right[w2][m] < 0)
                continue;
            if (! prefers(m, w2, w))
                continue;
            int holder = taken[w2];
            if (holder >= 0 && better_for_w(w2, m, holder))
                ++f;
        }
        if (w >= 0)
            for (int m2 : acc_of_w[w]) {
                if (m2 == m || ! decided[m2])
                    continue;
                if (prefers(m2, w, assign[m2]) && better_for_w(w, m2, m))
                    ++f;
            }
        return f;
    }

    long long leaf_blockers() const
    {
        long long blockers = 0;
        for (int m = 0; m < nl; ++m)
            for (int w : p.left[m].flatten()) {
                if (ranks.right[w][m] < 0)
                    continue;
                if (prefers(m, w, assign[m]) && better_for_w(w, m, taken[w]))
                    ++blockers;
            }
        return blockers;
    }

    void search(int depth)
    {
        if (exceeded)
            return;
        if (depth == nl) {
            long long delta = base_delta + decided_delta;
            if (delta < best_count && leaf_blockers() <= b) {
                best_count = delta;
                best_assign = assign;
            }
            return;
        }
        const int m = order[depth];

        auto try_value = [&](int w) {
            if (++nodes > node_limit) {
                exceeded = true;
                return;
            }
            const long long saved_forced = forced_blockers, saved_delta = decided_delta, saved_doom = doom_count;

            forced_blockers += new_forced(m, w);
            if (m1p[m] >= 0 && w != m1p[m])
                ++decided_delta;
            if (w >= 0 && w != m1p[m])
                ++decided_delta;
            if (doomed[m])
                --doom_count;
            int doomed_other = -1;
            if (w >= 0 && m1_of_w[w] >= 0 && m1_of_w[w] != m && ! decided[m1_of_w[w]] && ! doomed[m1_of_w[w]]) {
                doomed_other = m1_of_w[w];
                doomed[doomed_other] = 1;
                ++doom_count;
            }
            decided[m] = 1;
            assign[m] = w;
            if (w >= 0)
                taken[w] = m;

            if (forced_blockers <= b && base_delta + decided_delta + doom_count < best_count)
                search(depth + 1);

            if (w >= 0)
                taken[w] = -1;
            assign[m] = -2;
            decided[m] = 0;
            if (doomed_other >= 0) {
                doomed[doomed_other] = 0;
            }
            forced_blockers = saved_forced;
            decided_delta = saved_delta;
            doom_count = saved_doom;
        };

        for (int w : values[m]) {
            if (taken[w] >= 0)
                continue;
            try_value(w);
            if (exceeded)
                return;
        }
        try_value(-1);
    }
};

} // namespace iasm_detail

inline IncrementalResult solve_iasm_exact(const InstancePair & pair, long long node_limit = 10'000'000)
{
    const PreferenceProfile & p2 = pair.profile2;
    detail::require_strict_sm(p2);
    const long long b = pair.budget_b;

    // keeping M1 (dropping unacceptable pairs) is optimal whenever feasible:
    // no M2 can lose fewer edges than the forced ones
    Matching kept = restrict_to_acceptable(pair.matching1, p2);
    auto kept_bp = blocking_pairs(kept, p2);
    if (static_cast<long long>(kept_bp.size()) <= b) {
        IncrementalResult out;
        out.matching = kept;
        out.count = symmetric_difference_count(pair.matching1, kept);
        out.blockers = kept_bp;
        return out;
    }
    if (b == 0) {
        auto out = solve_ism(pair, Objective::Minimize);
        out.blockers.clear();
        return out;
    }

    iasm_detail::BranchAndBound bb(p2, pair.matching1, b, node_limit);
    {
        auto seed = solve_ism(pair, Objective::Minimize);
        bb.best_count = seed.count;
        bb.best_assign = seed.matching.left_partner(p2.n_left());
        for (auto & v : bb.best_assign)
            if (v < -1)
                v = -1;
    }
    bb.search(0);

    IncrementalResult out;
    for (int m = 0; m < p2.n_left(); ++m)
        if (m < static_cast<int>(bb.best_assign.size()) && bb.best_assign[m] >= 0)
            out.matching.pairs.emplace_back(m, bb.best_assign[m]);
    out.matching.normalise();
    out.count = symmetric_difference_count(pair.matching1, out.matching);
    out.blockers = blocking_pairs(out.matching, p2);
    out.nodes = bb.nodes;
    out.status = bb.exceeded ? SolveStatus::BudgetExceeded : SolveStatus::Optimal;
    return out;
}

// --------------------------------------------------------------------------
// IASM, XP in b: guess the set of pairs allowed to block, delete each guessed
// pair from the man's list, and take a maximum-weight stable matching with
// weight 2 on matching1 edges.

namespace iasm_detail {

inline bool next_combination(std::vector<int> & idx, int n)
{
    const int k = static_cast<int>(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[i] < n - (k - i)) {
            ++idx[i];
            for (int j = i + 1; j < k; ++j)
                idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

} // namespace iasm_detail

inline IncrementalResult solve_iasm_xp_b(const InstancePair & pair, long long node_limit = 10'000'000)
{
    const PreferenceProfile & p2 = pair.profile2;
    detail::require_strict_sm(p2);
    const long long b = pair.budget_b;
    auto pairs = acceptable_pairs(p2);
    const int np = static_cast<int>(pairs.size());

    // enumeration size guard
    {
        long long total = 0, binom = 1;
        for (int j = 0; j <= b && j <= np; ++j) {
            total += binom;
            if (total > node_limit)
                throw BudgetTooLarge("guessing up to " + std::to_string(b) + " blocking pairs out of " + std::to_string(np) + " exceeds the node limit");
            binom = binom * (np - j) / (j + 1);
        }
    }

    IncrementalResult best;
    best.count = std::numeric_limits<long long>::max();
    long long nodes = 0;

    auto evaluate = [&](const std::vector<int> & chosen) {
        ++nodes;
        PreferenceProfile mod = p2;
        for (int ci : chosen) {
            auto [m, w] = pairs[ci];
            for (auto & g : mod.left[m].tie_groups)
                g.erase(std::remove(g.begin(), g.end(), w), g.end());
            auto & tg = mod.left[m].tie_groups;
            tg.erase(std::remove_if(tg.begin(), tg.end(), [](const TieGroup & g) { return g.empty(); }), tg.end());
        }
        RankTable mranks(mod);
        EdgeWeights w2(mod.n_left(), mod.n_right());
        for (auto [m, w] : pair.matching1.pairs)
            if (m < mod.n_left() && w < mod.n_right() && mranks.mutually_acceptable(m, w))
                w2.weight[m][w] = 2;
        auto res = max_weight_stable_matching_full(mod, w2);
        long long count = symmetric_difference_count(pair.matching1, res.matching);
        if (count < best.count) {
            best.count = count;
            best.matching = res.matching;
        }
    };

    evaluate({});
    for (int size = 1; size <= b && size <= np; ++size) {
        std::vector<int> idx(size);
        std::iota(idx.begin(), idx.end(), 0);
        do
            evaluate(idx);
        while (iasm_detail::next_combination(idx, np));
    }

    best.blockers = blocking_pairs(best.matching, p2);
    best.nodes = nodes;
    return best;
}

// --------------------------------------------------------------------------
// IASM, XP in k: enumerate edge sets F with |F| <= k over pairs touched by
// matching1 or acceptable in profile2 and test whether M1 (triangle) F is a
// valid matching with at most b blocking pairs.

inline IncrementalResult solve_iasm_xp_k(const InstancePair & pair, long long node_limit = 10'000'000)
{
    const PreferenceProfile & p2 = pair.profile2;
    detail::require_strict_sm(p2);
    const long long k = pair.budget_k, b = pair.budget_b;
    RankTable ranks(p2);

    std::vector<std::pair<int, int>> edges = acceptable_pairs(p2);
    for (auto pr : pair.matching1.pairs)
        edges.push_back(pr);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    const int ne = static_cast<int>(edges.size());

    {
        long long total = 0, binom = 1;
        for (int j = 0; j <= k && j <= ne; ++j) {
            total += binom;
            if (total > node_limit)
                throw BudgetTooLarge("edge-set enumeration exceeds the node limit");
            binom = binom * (ne - j) / (j + 1);
        }
    }

    long long nodes = 0;
    auto feasible = [&](const std::vector<int> & chosen, Matching & out) {
        ++nodes;
        Matching m2 = pair.matching1;
        for (int ci : chosen) {
            auto e = edges[ci];
            auto it = std::find(m2.pairs.begin(), m2.pairs.end(), e);
            if (it != m2.pairs.end())
                m2.pairs.erase(it);
            else
                m2.pairs.push_back(e);
        }
        m2.normalise();
        std::vector<int> ldeg(p2.n_left(), 0), rdeg(p2.n_right(), 0);
        for (auto [m, w] : m2.pairs) {
            if (! ranks.mutually_acceptable(m, w))
                return false;
            if (++ldeg[m] > 1 || ++rdeg[w] > 1)
                return false;
        }
        if (static_cast<long long>(blocking_pairs(m2, p2).size()) > b)
            return false;
        out = m2;
        return true;
    };

    for (int size = 0; size <= k && size <= ne; ++size) {
        std::vector<int> idx(size);
        std::iota(idx.begin(), idx.end(), 0);
        bool more = true;
        while (more) {
            Matching m2;
            if (feasible(idx, m2)) {
                IncrementalResult out;
                out.matching = m2;
                out.count = size;
                out.blockers = blocking_pairs(m2, p2);
                out.nodes = nodes;
                return out;
            }
            more = size > 0 && iasm_detail::next_combination(idx, ne);
            if (size == 0)
                break;
        }
    }

    IncrementalResult out;
    out.status = SolveStatus::NoSolutionWithinK;
    out.count = -1;
    out.nodes = nodes;
    return out;
}

// --------------------------------------------------------------------------
// ISM-T via agent types: iterate over bipartite graphs on the (dummy-padded)
// type sets, reject those compatible with an unstable matching, and solve a
// maximum-weight perfect matching on the induced agent graph.

namespace ismt_detail {

// Max-weight perfect matching on an N x N bipartite graph (Hungarian
// algorithm on negated weights). Returns false when no perfect matching
// avoids forbidden cells.
inline bool hungarian_max_perfect(const std::vector<std::vector<long long>> & weight,
                                  const std::vector<std::vector<char>> & allowed,
                                  std::vector<int> & match_of_row, long long & total)
{
    const int n = static_cast<int>(weight.size());
    // large enough to dominate any feasible matching, small enough that the
    // accumulated potentials stay far from overflow
    const long long FORBID = 1'000'000'000;
    std::vector<std::vector<long long>> cost(n + 1, std::vector<long long>(n + 1, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cost[i + 1][j + 1] = allowed[i][j] ? -weight[i][j] : FORBID;

    std::vector<long long> u(n + 1, 0), v(n + 1, 0);
    std::vector<int> p_col(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p_col[0] = i;
        int j0 = 0;
        std::vector<long long> minv(n + 1, std::numeric_limits<long long>::max());
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p_col[j0], j1 = 0;
            long long delta = std::numeric_limits<long long>::max();
            for (int j = 1; j <= n; ++j)
                if (! used[j]) {
                    long long cur = cost[i0][j] - u[i0] - v[j];
                    if (cur < minv[j]) {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if (minv[j] < delta) {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            for (int j = 0; j <= n; ++j)
                if (used[j]) {
                    u[p_col[j]] += delta;
                    v[j] -= delta;
                }
                else
                    minv[j] -= delta;
            j0 = j1;
        } while (p_col[j0] != 0);
        do {
            int j1 = way[j0];
            p_col[j0] = p_col[j1];
            j0 = j1;
        } while (j0);
    }

    match_of_row.assign(n, -1);
    total = 0;
    for (int j = 1; j <= n; ++j) {
        int i = p_col[j];
        if (i == 0)
            return false;
        if (! allowed[i - 1][j - 1])
            return false;
        match_of_row[i - 1] = j - 1;
        total += weight[i - 1][j - 1];
    }
    return true;
}

} // namespace ismt_detail

inline IncrementalResult solve_ismt_agent_types(const InstancePair & pair, int max_types = 5, long long node_limit = 10'000'000)
{
    const PreferenceProfile & p2 = pair.profile2;
    if (p2.mode != Mode::SM)
        throw Error("solve_ismt_agent_types expects an SM(-T) instance");
    RankTable ranks(p2);
    const int nm = p2.n_left(), nw = p2.n_right();

    // group agents into types: identical preference relation and everyone
    // else indifferent between them
    auto group_side = [&](Side side) {
        const int n = side == Side::Left ? nm : nw;
        const int n_opp = side == Side::Left ? nw : nm;
        std::map<std::pair<std::vector<std::vector<int>>, std::vector<int>>, int> seen;
        std::vector<int> type_of(n);
        for (int a = 0; a < n; ++a) {
            std::vector<int> viewed_by(n_opp);
            for (int o = 0; o < n_opp; ++o)
                viewed_by[o] = side == Side::Left ? ranks.right[o][a] : ranks.left[o][a];
            std::vector<std::vector<int>> lists;
            for (const auto & g : p2.list_of(side, a).tie_groups)
                lists.push_back(g);
            auto key = std::make_pair(std::move(lists), std::move(viewed_by));
            auto [it, inserted] = seen.emplace(std::move(key), static_cast<int>(seen.size()));
            type_of[a] = it->second;
        }
        return std::make_pair(type_of, static_cast<int>(seen.size()));
    };
    auto [type_of_m, tU] = group_side(Side::Left);
    auto [type_of_w, tW] = group_side(Side::Right);
    if (tU > max_types || tW > max_types)
        throw TooManyTypes("instance has " + std::to_string(tU) + "x" + std::to_string(tW) + " agent types");

    // type-level preference ranks; dummies sit strictly below every real type
    const int dummyU = tU, dummyW = tW;
    const int BIG = std::max(nm, nw) + 7;
    std::vector<int> rep_m(tU, -1), rep_w(tW, -1);
    for (int m = 0; m < nm; ++m)
        if (rep_m[type_of_m[m]] < 0)
            rep_m[type_of_m[m]] = m;
    for (int w = 0; w < nw; ++w)
        if (rep_w[type_of_w[w]] < 0)
            rep_w[type_of_w[w]] = w;

    auto pref_U = [&](int a, int beta) -> int { // rank of woman-type beta for man-type a; -1 unacceptable
        if (a == dummyU)
            return 0;
        if (beta == dummyW)
            return BIG;
        return ranks.left[rep_m[a]][rep_w[beta]];
    };
    auto pref_W = [&](int beta, int a) -> int {
        if (beta == dummyW)
            return 0;
        if (a == dummyU)
            return BIG;
        return ranks.right[rep_w[beta]][rep_m[a]];
    };

    std::vector<std::pair<int, int>> universe; // mutually acceptable type pairs, dummies included
    for (int a = 0; a <= tU; ++a)
        for (int beta = 0; beta <= tW; ++beta)
            if (pref_U(a, beta) >= 0 && pref_W(beta, a) >= 0)
                universe.emplace_back(a, beta);
    const int ne = static_cast<int>(universe.size());
    if (ne >= 62 || (std::int64_t{1} << ne) > node_limit)
        throw BudgetTooLarge("type graph enumeration of 2^" + std::to_string(ne) + " graphs exceeds the node limit");

    const int N = nm + nw; // each side padded with the other side's size in dummies
    std::vector<int> ltype(N), rtype(N);
    for (int i = 0; i < N; ++i) {
        ltype[i] = i < nm ? type_of_m[i] : dummyU;
        rtype[i] = i < nw ? type_of_w[i] : dummyW;
    }

    IncrementalResult best;
    best.count = std::numeric_limits<long long>::max();
    long long best_weight = std::numeric_limits<long long>::min();
    bool found = false;

    std::vector<std::vector<long long>> weight(N, std::vector<long long>(N, 0));
    std::vector<std::vector<char>> allowed(N, std::vector<char>(N, 0));
    for (int i = 0; i < nm; ++i)
        for (int j = 0; j < nw; ++j)
            weight[i][j] = pair.matching1.contains(i, j) ? 1 : -1;

    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ne); ++mask) {
        // reject graphs that admit an unstable compatible matching
        std::vector<int> worstU(tU + 1, std::numeric_limits<int>::min());
        std::vector<int> worstW(tW + 1, std::numeric_limits<int>::min());
        std::vector<std::vector<char>> type_edge(tU + 1, std::vector<char>(tW + 1, 0));
        for (int e = 0; e < ne; ++e)
            if ((mask >> e) & 1) {
                auto [a, beta] = universe[e];
                type_edge[a][beta] = 1;
                worstU[a] = std::max(worstU[a], pref_U(a, beta));
                worstW[beta] = std::max(worstW[beta], pref_W(beta, a));
            }
        bool rejected = false;
        for (const auto & [a, beta] : universe) {
            if (pref_U(a, beta) < worstU[a] && pref_W(beta, a) < worstW[beta]) {
                rejected = true;
                break;
            }
        }
        if (rejected)
            continue;

        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                allowed[i][j] = type_edge[ltype[i]][rtype[j]];

        std::vector<int> match_row;
        long long total = 0;
        if (! ismt_detail::hungarian_max_perfect(weight, allowed, match_row, total))
            continue;
        found = true;
        if (total > best_weight) {
            best_weight = total;
            best.matching.pairs.clear();
            for (int i = 0; i < nm; ++i)
                if (match_row[i] >= 0 && match_row[i] < nw)
                    best.matching.pairs.emplace_back(i, match_row[i]);
            best.matching.normalise();
        }
    }
    if (! found)
        throw Error("no type graph admits a perfect matching");

    best.count = symmetric_difference_count(pair.matching1, best.matching);
    best.blockers = blocking_pairs(best.matching, p2);
    return best;
}

} // namespace matchshift
