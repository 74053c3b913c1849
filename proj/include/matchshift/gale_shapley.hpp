#pragma once

#include <matchshift/core.hpp>
#include <matchshift/errors.hpp>

#include <vector>

namespace matchshift {

namespace detail {

inline void require_strict_sm(const PreferenceProfile & p)
{
    if (p.mode != Mode::SM)
        throw Error("expected an SM profile (all capacities 1)");
    if (! p.all_strict())
        throw TiesUnsupported("deferred acceptance needs strict preference lists");
}

// Proposing-side-optimal deferred acceptance over index-based strict lists.
// lists[a] is a's preference order, rank[b][a] the rank of a in b's list.
inline std::vector<int> deferred_acceptance(const std::vector<std::vector<int>> & lists,
                                            const std::vector<std::vector<int>> & rank_of_proposer,
                                            int n_receivers)
{
    const int n = static_cast<int>(lists.size());
    std::vector<int> next(n, 0);
    std::vector<int> fiance(n_receivers, -1); // receiver -> proposer
    std::vector<int> stack;
    stack.reserve(n);
    for (int a = n - 1; a >= 0; --a)
        stack.push_back(a);
    while (! stack.empty()) {
        int a = stack.back();
        stack.pop_back();
        while (next[a] < static_cast<int>(lists[a].size())) {
            int b = lists[a][next[a]++];
            if (rank_of_proposer[b][a] < 0)
                continue; // not mutually acceptable
            int cur = fiance[b];
            if (cur < 0) {
                fiance[b] = a;
                break;
            }
            if (rank_of_proposer[b][a] < rank_of_proposer[b][cur]) {
                fiance[b] = a;
                stack.push_back(cur);
                break;
            }
        }
    }
    return fiance;
}

} // namespace detail

// The proposing-side-optimal stable matching of a strict SM profile.
inline Matching gale_shapley(const PreferenceProfile & p, Side proposing)
{
    detail::require_strict_sm(p);
    const int nl = p.n_left(), nr = p.n_right();

    std::vector<std::vector<int>> prop_lists, recv_rank;
    if (proposing == Side::Left) {
        prop_lists.resize(nl);
        for (int m = 0; m < nl; ++m)
            prop_lists[m] = p.left[m].flatten();
        recv_rank.assign(nr, std::vector<int>(nl, -1));
        for (int w = 0; w < nr; ++w) {
            auto order = p.right[w].flatten();
            for (int i = 0; i < static_cast<int>(order.size()); ++i)
                recv_rank[w][order[i]] = i;
        }
    }
    else {
        prop_lists.resize(nr);
        for (int w = 0; w < nr; ++w)
            prop_lists[w] = p.right[w].flatten();
        recv_rank.assign(nl, std::vector<int>(nr, -1));
        for (int m = 0; m < nl; ++m) {
            auto order = p.left[m].flatten();
            for (int i = 0; i < static_cast<int>(order.size()); ++i)
                recv_rank[m][order[i]] = i;
        }
    }

    auto fiance = detail::deferred_acceptance(prop_lists, recv_rank, proposing == Side::Left ? nr : nl);

    Matching result;
    for (int b = 0; b < static_cast<int>(fiance.size()); ++b)
        if (fiance[b] >= 0) {
            if (proposing == Side::Left)
                result.pairs.emplace_back(fiance[b], b);
            else
                result.pairs.emplace_back(b, fiance[b]);
        }
    result.normalise();
    return result;
}

inline long long stable_matching_size(const PreferenceProfile & p)
{
    return gale_shapley(p, Side::Left).size();
}

} // namespace matchshift
