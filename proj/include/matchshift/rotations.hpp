#pragma once

#include <matchshift/core.hpp>
#include <matchshift/errors.hpp>
#include <matchshift/gale_shapley.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <vector>

namespace matchshift {

// A rotation is a cyclic exchange taking one stable matching to an adjacent
// one: man cycle[i].first leaves cycle[i].second for cycle[(i+1)%len].second.
struct Rotation {
    std::vector<std::pair<int, int>> cycle;
    long long weight_delta = 0; // filled in by weighted solvers
};

// Rotations in discovery order (a linear extension of the poset) plus the
// precedence digraph. Closed subsets of the precedence relation are in
// bijection with the stable matchings, starting from the men-optimal one.
struct RotationPoset {
    Matching men_optimal;
    std::vector<Rotation> rotations;
    std::vector<std::vector<int>> preds; // preds[t]: rotations required before t
};

struct EdgeWeights {
    std::vector<std::vector<long long>> weight; // [left][right], default 0

    EdgeWeights() = default;
    EdgeWeights(int n_left, int n_right) : weight(n_left, std::vector<long long>(n_right, 0)) {}

    long long of(int m, int w) const
    {
        if (weight.empty())
            return 0;
        return weight.at(m).at(w);
    }

    long long matching_weight(const Matching & m) const
    {
        long long total = 0;
        for (auto [l, r] : m.pairs)
            total += of(l, r);
        return total;
    }
};

namespace rotation_detail {

// Shared list state for the extended Gale-Shapley phase and the subsequent
// rotation eliminations. Women's reduced lists shrink monotonically; a
// woman's current fiance is always the last alive man on her list, and a
// matched man's fiancee is the first alive woman on his.
struct Machine {
    int nl, nr;
    std::vector<std::vector<int>> mlist, wlist; // strict orders
    std::vector<std::vector<int>> mrank, wrank;
    std::vector<std::vector<char>> alive;       // alive[m][w]
    std::vector<int> mfirst;                    // first maybe-alive position in mlist
    std::vector<int> wtail;                     // last maybe-alive position in wlist
    std::vector<int> fiance;                    // woman -> man or -1
    std::vector<int> partner;                   // man -> woman or -1

    explicit Machine(const PreferenceProfile & p)
        : nl(p.n_left()), nr(p.n_right()),
          mlist(nl), wlist(nr),
          mrank(nl, std::vector<int>(nr, -1)), wrank(nr, std::vector<int>(nl, -1)),
          alive(nl, std::vector<char>(nr, 0)),
          mfirst(nl, 0), wtail(nr), fiance(nr, -1), partner(nl, -1)
    {
        RankTable ranks(p);
        for (int m = 0; m < nl; ++m) {
            for (int w : p.left[m].flatten())
                if (ranks.right[w][m] >= 0) {
                    mrank[m][w] = static_cast<int>(mlist[m].size());
                    mlist[m].push_back(w);
                    alive[m][w] = 1;
                }
        }
        for (int w = 0; w < nr; ++w) {
            for (int m : p.right[w].flatten())
                if (ranks.left[m][w] >= 0) {
                    wrank[w][m] = static_cast<int>(wlist[w].size());
                    wlist[w].push_back(m);
                }
            wtail[w] = static_cast<int>(wlist[w].size()) - 1;
        }
    }

    // Woman w holds man m: every strictly worse man is removed from her list.
    void truncate_below(int w, int m)
    {
        const int keep = wrank[w][m];
        while (wtail[w] > keep) {
            int dead = wlist[w][wtail[w]--];
            alive[dead][w] = 0;
        }
    }

    int first_alive(int m)
    {
        auto & lst = mlist[m];
        while (mfirst[m] < static_cast<int>(lst.size()) && ! alive[m][lst[mfirst[m]]])
            ++mfirst[m];
        return mfirst[m] < static_cast<int>(lst.size()) ? lst[mfirst[m]] : -1;
    }

    int second_alive(int m)
    {
        first_alive(m);
        for (int pos = mfirst[m] + 1; pos < static_cast<int>(mlist[m].size()); ++pos)
            if (alive[m][mlist[m][pos]])
                return mlist[m][pos];
        return -1;
    }

    void run_proposals()
    {
        std::vector<int> free;
        for (int m = nl - 1; m >= 0; --m)
            free.push_back(m);
        while (! free.empty()) {
            int m = free.back();
            free.pop_back();
            int w = first_alive(m);
            if (w < 0)
                continue; // m stays unmatched in every stable matching
            int prev = fiance[w];
            fiance[w] = m;
            partner[m] = w;
            if (prev >= 0) {
                partner[prev] = -1;
                free.push_back(prev);
            }
            truncate_below(w, m);
        }
    }

    Matching current_matching() const
    {
        Matching mm;
        for (int m = 0; m < nl; ++m)
            if (partner[m] >= 0)
                mm.pairs.emplace_back(m, partner[m]);
        mm.normalise();
        return mm;
    }
};

} // namespace rotation_detail

// Gusfield-Irving rotation machinery for strict SM profiles.
inline RotationPoset build_rotation_poset(const PreferenceProfile & p)
{
    detail::require_strict_sm(p);
    rotation_detail::Machine mac(p);
    mac.run_proposals();

    RotationPoset poset;
    poset.men_optimal = mac.current_matching();

    // Eliminate exposed rotations until the women-optimal matching remains.
    // The set of rotations found is independent of the elimination order.
    std::vector<int> color(mac.nl, 0);
    std::vector<std::pair<int, int>> created_by_pair; // keyed below
    std::map<std::pair<int, int>, int> created_by;    // (m,w) new pair -> rotation
    std::vector<std::vector<std::pair<int, int>>> improvements(mac.nr); // per woman: (rotation, new man)

    while (true) {
        std::fill(color.begin(), color.end(), 0);
        std::vector<int> cycle_men;
        for (int start = 0; start < mac.nl && cycle_men.empty(); ++start) {
            if (color[start] != 0 || mac.partner[start] < 0)
                continue;
            std::vector<int> path;
            int x = start;
            while (x >= 0 && color[x] == 0) {
                color[x] = 1;
                path.push_back(x);
                int w2 = mac.second_alive(x);
                x = w2 >= 0 ? mac.fiance[w2] : -1;
            }
            if (x >= 0 && color[x] == 1) {
                auto it = std::find(path.begin(), path.end(), x);
                cycle_men.assign(it, path.end());
            }
            for (int m : path)
                color[m] = 2;
        }
        if (cycle_men.empty())
            break;

        const int t = static_cast<int>(poset.rotations.size());
        Rotation rot;
        const int r = static_cast<int>(cycle_men.size());
        for (int m : cycle_men)
            rot.cycle.emplace_back(m, mac.partner[m]);

        // eliminate: every man moves to his successor's woman, every woman
        // improves and discards the men below her new fiance
        for (int i = 0; i < r; ++i) {
            int m = rot.cycle[i].first;
            int w_new = rot.cycle[(i + 1) % r].second;
            mac.fiance[w_new] = m;
            mac.partner[m] = w_new;
            improvements[w_new].emplace_back(t, m);
            created_by[{m, w_new}] = t;
        }
        for (int i = 0; i < r; ++i) {
            int m = rot.cycle[i].first;
            mac.truncate_below(rot.cycle[(i + 1) % r].second, m);
        }
        poset.rotations.push_back(std::move(rot));
    }

    // Sparse precedence digraph. Two rules:
    //  (1) the rotation that created a pair precedes the rotation breaking it;
    //  (2) if eliminating t makes man m skip woman w in his list, the rotation
    //      that lifted w strictly above m precedes t.
    const int R = static_cast<int>(poset.rotations.size());
    poset.preds.assign(R, {});
    std::vector<int> m0_partner(mac.nr, -1);
    for (auto [l, rr] : poset.men_optimal.pairs)
        m0_partner[rr] = l;
    for (int t = 0; t < R; ++t) {
        const auto & rot = poset.rotations[t];
        const int r = static_cast<int>(rot.cycle.size());
        for (int i = 0; i < r; ++i) {
            auto [m, w_old] = rot.cycle[i];
            int w_new = rot.cycle[(i + 1) % r].second;
            if (m0_partner[w_old] != m) {
                auto it = created_by.find({m, w_old});
                if (it != created_by.end() && it->second != t)
                    poset.preds[t].push_back(it->second);
            }
            // women strictly between w_old and w_new in m's original order
            // were lifted above m before this rotation could fire
            for (int pos = mac.mrank[m][w_old] + 1; pos < mac.mrank[m][w_new]; ++pos) {
                int w = mac.mlist[m][pos];
                const int threshold = mac.wrank[w][m];
                int old_rank = m0_partner[w] >= 0 ? mac.wrank[w][m0_partner[w]] : std::numeric_limits<int>::max();
                if (old_rank < threshold)
                    continue; // rejected m already in the proposal phase
                for (auto [tau, new_man] : improvements[w]) {
                    int new_rank = mac.wrank[w][new_man];
                    if (old_rank > threshold && new_rank < threshold) {
                        if (tau != t)
                            poset.preds[t].push_back(tau);
                        break;
                    }
                    old_rank = new_rank;
                }
            }
        }
        auto & pr = poset.preds[t];
        std::sort(pr.begin(), pr.end());
        pr.erase(std::unique(pr.begin(), pr.end()), pr.end());
    }
    return poset;
}

// Matching reached from the men-optimal one by eliminating a closed subset.
inline Matching apply_closed_subset(const RotationPoset & poset, const std::vector<char> & include)
{
    const int nl_guess = poset.men_optimal.pairs.empty() ? 0 : poset.men_optimal.pairs.back().first + 1;
    int max_m = nl_guess;
    for (const auto & rot : poset.rotations)
        for (auto [m, w] : rot.cycle)
            max_m = std::max(max_m, m + 1);
    std::vector<int> pm(max_m, -1);
    for (auto [m, w] : poset.men_optimal.pairs)
        pm[m] = w;
    for (std::size_t t = 0; t < poset.rotations.size(); ++t) {
        if (! include[t])
            continue;
        const auto & cyc = poset.rotations[t].cycle;
        const int r = static_cast<int>(cyc.size());
        for (int i = 0; i < r; ++i)
            pm[cyc[i].first] = cyc[(i + 1) % r].second;
    }
    Matching out;
    for (int m = 0; m < max_m; ++m)
        if (pm[m] >= 0)
            out.pairs.emplace_back(m, pm[m]);
    out.normalise();
    return out;
}

inline bool is_closed_subset(const RotationPoset & poset, const std::vector<char> & include)
{
    for (std::size_t t = 0; t < poset.rotations.size(); ++t)
        if (include[t])
            for (int q : poset.preds[t])
                if (! include[q])
                    return false;
    return true;
}

// All stable matchings via closed subsets; test-scale only.
inline std::vector<Matching> enumerate_stable_from_poset(const RotationPoset & poset, int max_rotations = 20)
{
    const int R = static_cast<int>(poset.rotations.size());
    if (R > max_rotations)
        throw InstanceTooLarge("too many rotations for exhaustive closed-subset enumeration");
    std::vector<Matching> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << R); ++mask) {
        std::vector<char> inc(R, 0);
        for (int t = 0; t < R; ++t)
            inc[t] = (mask >> t) & 1;
        if (is_closed_subset(poset, inc))
            out.push_back(apply_closed_subset(poset, inc));
    }
    std::sort(out.begin(), out.end(), [](const Matching & a, const Matching & b) { return a.pairs < b.pairs; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace rotation_detail {

// Dinic max-flow, small graphs, int64 capacities.
struct Dinic {
    struct Arc {
        int to;
        long long cap;
        int rev;
    };
    std::vector<std::vector<Arc>> g;
    std::vector<int> level, iter;

    explicit Dinic(int n) : g(n), level(n), iter(n) {}

    void add_edge(int from, int to, long long cap)
    {
        g[from].push_back({to, cap, static_cast<int>(g[to].size())});
        g[to].push_back({from, 0, static_cast<int>(g[from].size()) - 1});
    }

    bool bfs(int s, int t)
    {
        std::fill(level.begin(), level.end(), -1);
        std::queue<int> q;
        level[s] = 0;
        q.push(s);
        while (! q.empty()) {
            int v = q.front();
            q.pop();
            for (const auto & a : g[v])
                if (a.cap > 0 && level[a.to] < 0) {
                    level[a.to] = level[v] + 1;
                    q.push(a.to);
                }
        }
        return level[t] >= 0;
    }

    long long dfs(int v, int t, long long f)
    {
        if (v == t)
            return f;
        for (int & i = iter[v]; i < static_cast<int>(g[v].size()); ++i) {
            Arc & a = g[v][i];
            if (a.cap > 0 && level[v] < level[a.to]) {
                long long d = dfs(a.to, t, std::min(f, a.cap));
                if (d > 0) {
                    a.cap -= d;
                    g[a.to][a.rev].cap += d;
                    return d;
                }
            }
        }
        return 0;
    }

    long long max_flow(int s, int t)
    {
        long long flow = 0;
        while (bfs(s, t)) {
            std::fill(iter.begin(), iter.end(), 0);
            while (long long f = dfs(s, t, std::numeric_limits<long long>::max()))
                flow += f;
        }
        return flow;
    }

    std::vector<char> residual_reachable(int s)
    {
        std::vector<char> seen(g.size(), 0);
        std::queue<int> q;
        seen[s] = 1;
        q.push(s);
        while (! q.empty()) {
            int v = q.front();
            q.pop();
            for (const auto & a : g[v])
                if (a.cap > 0 && ! seen[a.to]) {
                    seen[a.to] = 1;
                    q.push(a.to);
                }
        }
        return seen;
    }
};

} // namespace rotation_detail

struct MaxWeightStableResult {
    Matching matching;
    long long weight = 0;
    RotationPoset poset;
    std::vector<char> closed_subset;
};

// Maximum-weight stable matching: men-optimal matching plus elimination of
// the maximum-gain closed subset of rotations, found by a min cut over the
// precedence digraph. Among optimal subsets the inclusion-minimal one is
// chosen (unique, and empty when no rotation strictly gains).
inline MaxWeightStableResult max_weight_stable_matching_full(const PreferenceProfile & p, const EdgeWeights & weights)
{
    MaxWeightStableResult res;
    res.poset = build_rotation_poset(p);
    auto & rots = res.poset.rotations;
    const int R = static_cast<int>(rots.size());

    for (auto & rot : rots) {
        long long delta = 0;
        const int r = static_cast<int>(rot.cycle.size());
        for (int i = 0; i < r; ++i) {
            auto [m, w_old] = rot.cycle[i];
            int w_new = rot.cycle[(i + 1) % r].second;
            delta += weights.of(m, w_new) - weights.of(m, w_old);
        }
        rot.weight_delta = delta;
    }

    const int s = R, t = R + 1;
    rotation_detail::Dinic net(R + 2);
    const long long INF = std::numeric_limits<long long>::max() / 4;
    for (int i = 0; i < R; ++i) {
        if (rots[i].weight_delta > 0)
            net.add_edge(s, i, rots[i].weight_delta);
        else if (rots[i].weight_delta < 0)
            net.add_edge(i, t, -rots[i].weight_delta);
        for (int q : res.poset.preds[i])
            net.add_edge(i, q, INF);
    }
    net.max_flow(s, t);
    auto reach = net.residual_reachable(s);

    res.closed_subset.assign(R, 0);
    for (int i = 0; i < R; ++i)
        res.closed_subset[i] = reach[i];
    res.matching = apply_closed_subset(res.poset, res.closed_subset);
    res.weight = weights.matching_weight(res.matching);
    return res;
}

inline Matching max_weight_stable_matching(const PreferenceProfile & p, const EdgeWeights & weights)
{
    return max_weight_stable_matching_full(p, weights).matching;
}

} // namespace matchshift
