#pragma once

#include <matchshift/errors.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace matchshift {

enum class Side { Left, Right };

inline Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

struct AgentId {
    Side side;
    int index;

    friend bool operator==(const AgentId &, const AgentId &) = default;
    friend auto operator<=>(const AgentId &, const AgentId &) = default;
};

// One tie group is a set of opposite-side agent indices the owner is
// indifferent between. Canonical form keeps each group sorted; group order is
// the preference order.
using TieGroup = std::vector<int>;

struct PreferenceList {
    std::vector<TieGroup> tie_groups;

    bool empty() const { return tie_groups.empty(); }

    bool strict() const
    {
        for (const auto & g : tie_groups)
            if (g.size() > 1)
                return false;
        return true;
    }

    int entry_count() const
    {
        int n = 0;
        for (const auto & g : tie_groups)
            n += static_cast<int>(g.size());
        return n;
    }

    std::vector<int> flatten() const
    {
        std::vector<int> out;
        out.reserve(entry_count());
        for (const auto & g : tie_groups)
            out.insert(out.end(), g.begin(), g.end());
        return out;
    }

    static PreferenceList strict_order(const std::vector<int> & order)
    {
        PreferenceList l;
        l.tie_groups.reserve(order.size());
        for (int x : order)
            l.tie_groups.push_back({x});
        return l;
    }

    void canonicalise()
    {
        for (auto & g : tie_groups)
            std::sort(g.begin(), g.end());
    }

    friend bool operator==(const PreferenceList &, const PreferenceList &) = default;
};

enum class Mode { SM, HR };

struct PreferenceProfile {
    Mode mode = Mode::SM;
    std::vector<PreferenceList> left;
    std::vector<PreferenceList> right;
    std::vector<int> capacities; // one per right agent, all 1 in SM mode

    int n_left() const { return static_cast<int>(left.size()); }
    int n_right() const { return static_cast<int>(right.size()); }
    int n_agents() const { return n_left() + n_right(); }

    const PreferenceList & list_of(Side s, int i) const
    {
        return s == Side::Left ? left.at(i) : right.at(i);
    }

    PreferenceList & list_of(Side s, int i)
    {
        return s == Side::Left ? left.at(i) : right.at(i);
    }

    int capacity(int h) const { return mode == Mode::SM ? 1 : capacities.at(h); }

    bool all_strict() const
    {
        for (const auto & l : left)
            if (! l.strict())
                return false;
        for (const auto & l : right)
            if (! l.strict())
                return false;
        return true;
    }

    static PreferenceProfile sm(int n_left, int n_right)
    {
        PreferenceProfile p;
        p.mode = Mode::SM;
        p.left.resize(n_left);
        p.right.resize(n_right);
        p.capacities.assign(n_right, 1);
        return p;
    }

    static PreferenceProfile hr(int n_residents, int n_hospitals, std::vector<int> quotas)
    {
        PreferenceProfile p;
        p.mode = Mode::HR;
        p.left.resize(n_residents);
        p.right.resize(n_hospitals);
        p.capacities = std::move(quotas);
        return p;
    }

    friend bool operator==(const PreferenceProfile &, const PreferenceProfile &) = default;
};

// A matching is a sorted set of (left, right) index pairs.
struct Matching {
    std::vector<std::pair<int, int>> pairs;

    void normalise()
    {
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    }

    bool contains(int l, int r) const
    {
        return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(l, r));
    }

    int size() const { return static_cast<int>(pairs.size()); }

    // Partner of each left agent, -1 if unmatched.
    std::vector<int> left_partner(int n_left) const
    {
        std::vector<int> p(n_left, -1);
        for (auto [l, r] : pairs)
            p.at(l) = r;
        return p;
    }

    std::vector<std::vector<int>> right_partners(int n_right) const
    {
        std::vector<std::vector<int>> p(n_right);
        for (auto [l, r] : pairs)
            p.at(r).push_back(l);
        return p;
    }

    friend bool operator==(const Matching &, const Matching &) = default;
};

struct InstancePair {
    PreferenceProfile profile1;
    PreferenceProfile profile2;
    Matching matching1;
    long long budget_k = 0;
    long long budget_b = 0;
};

// Ranks: rank[a][b] = index of b's tie group in a's list, or -1 if
// unacceptable. Lower is better; equal means indifferent.
struct RankTable {
    std::vector<std::vector<int>> left;  // left[m][w]
    std::vector<std::vector<int>> right; // right[w][m]

    explicit RankTable(const PreferenceProfile & p)
        : left(p.n_left(), std::vector<int>(p.n_right(), -1)),
          right(p.n_right(), std::vector<int>(p.n_left(), -1))
    {
        for (int m = 0; m < p.n_left(); ++m)
            for (std::size_t g = 0; g < p.left[m].tie_groups.size(); ++g)
                for (int w : p.left[m].tie_groups[g])
                    left[m][w] = static_cast<int>(g);
        for (int w = 0; w < p.n_right(); ++w)
            for (std::size_t g = 0; g < p.right[w].tie_groups.size(); ++g)
                for (int m : p.right[w].tie_groups[g])
                    right[w][m] = static_cast<int>(g);
    }

    bool mutually_acceptable(int m, int w) const { return left[m][w] >= 0 && right[w][m] >= 0; }
};

namespace detail {

inline void check_list(const PreferenceList & l, int opposite_count, const std::string & owner)
{
    std::vector<char> seen(opposite_count, 0);
    for (const auto & g : l.tie_groups) {
        if (g.empty())
            throw Error("empty tie group in list of " + owner);
        for (int x : g) {
            if (x < 0 || x >= opposite_count)
                throw IndexOutOfRange("agent " + owner + " lists partner index " + std::to_string(x + 1) + " out of range");
            if (seen[x])
                throw DuplicateEntry("agent " + owner + " lists partner " + std::to_string(x + 1) + " twice");
            seen[x] = 1;
        }
    }
}

} // namespace detail

// Validates index ranges, duplicates and capacities, then intersects
// acceptability down to mutual pairs. Tie-group order is preserved; groups
// that empty out are dropped; groups are put in canonical (sorted) form.
inline PreferenceProfile validate_and_normalize(const PreferenceProfile & raw)
{
    PreferenceProfile p = raw;
    if (p.mode == Mode::SM)
        p.capacities.assign(p.n_right(), 1);
    if (static_cast<int>(p.capacities.size()) != p.n_right())
        throw Error("capacity vector size does not match right side");
    for (int h = 0; h < p.n_right(); ++h)
        if (p.capacities[h] < 1)
            throw ZeroCapacity("hospital h" + std::to_string(h + 1) + " has capacity " + std::to_string(p.capacities[h]));

    for (int m = 0; m < p.n_left(); ++m)
        detail::check_list(p.left[m], p.n_right(), "m" + std::to_string(m + 1));
    for (int w = 0; w < p.n_right(); ++w)
        detail::check_list(p.right[w], p.n_left(), p.mode == Mode::SM ? "w" + std::to_string(w + 1) : "h" + std::to_string(w + 1));

    RankTable ranks(p);
    auto filter = [](PreferenceList & l, auto && accept) {
        std::vector<TieGroup> kept;
        for (auto & g : l.tie_groups) {
            TieGroup ng;
            for (int x : g)
                if (accept(x))
                    ng.push_back(x);
            if (! ng.empty())
                kept.push_back(std::move(ng));
        }
        l.tie_groups = std::move(kept);
    };
    for (int m = 0; m < p.n_left(); ++m)
        filter(p.left[m], [&](int w) { return ranks.right[w][m] >= 0; });
    for (int w = 0; w < p.n_right(); ++w)
        filter(p.right[w], [&](int m) { return ranks.left[m][w] >= 0; });

    for (auto & l : p.left)
        l.canonicalise();
    for (auto & l : p.right)
        l.canonicalise();
    return p;
}

inline void check_matching_valid(const Matching & matching, const PreferenceProfile & p, const RankTable & ranks)
{
    std::vector<int> left_deg(p.n_left(), 0), right_deg(p.n_right(), 0);
    for (auto [m, w] : matching.pairs) {
        if (m < 0 || m >= p.n_left() || w < 0 || w >= p.n_right())
            throw InvalidPair("matching references agent out of range");
        if (! ranks.mutually_acceptable(m, w))
            throw InvalidPair("matched pair m" + std::to_string(m + 1) + ",w" + std::to_string(w + 1) + " is not mutually acceptable");
        if (++left_deg[m] > 1)
            throw InvalidPair("left agent m" + std::to_string(m + 1) + " matched twice");
        if (++right_deg[w] > p.capacity(w))
            throw InvalidPair("right agent " + std::to_string(w + 1) + " exceeds its capacity");
    }
}

// All pairs blocking `matching` in `p`. An unmatched agent strictly prefers
// every acceptable partner to staying alone; an under-capacity hospital
// blocks with any acceptable resident that prefers it.
inline std::vector<std::pair<int, int>> blocking_pairs(const Matching & matching, const PreferenceProfile & p)
{
    RankTable ranks(p);
    check_matching_valid(matching, p, ranks);

    const int unmatched_rank = std::max(p.n_left(), p.n_right()) + 1;
    std::vector<int> m_rank(p.n_left(), unmatched_rank); // rank m gives his partner
    auto right_matched = matching.right_partners(p.n_right());
    for (auto [m, w] : matching.pairs)
        m_rank[m] = ranks.left[m][w];

    // worst_rank[w]: rank of w's least preferred current partner, or
    // unmatched_rank if w has spare capacity.
    std::vector<int> worst_rank(p.n_right(), unmatched_rank);
    for (int w = 0; w < p.n_right(); ++w) {
        if (static_cast<int>(right_matched[w].size()) < p.capacity(w))
            continue;
        int worst = -1;
        for (int m : right_matched[w])
            worst = std::max(worst, ranks.right[w][m]);
        worst_rank[w] = worst;
    }

    std::vector<std::pair<int, int>> result;
    for (int m = 0; m < p.n_left(); ++m)
        for (const auto & g : p.left[m].tie_groups)
            for (int w : g) {
                if (ranks.right[w][m] < 0)
                    continue;
                if (ranks.left[m][w] < m_rank[m] && ranks.right[w][m] < worst_rank[w])
                    result.emplace_back(m, w);
            }
    std::sort(result.begin(), result.end());
    return result;
}

inline bool is_stable(const Matching & matching, const PreferenceProfile & p)
{
    return blocking_pairs(matching, p).empty();
}

// Swap distance between two weak orders: discordant pairs plus pairs tied in
// one relation but not the other. nullopt when the underlying sets differ.
inline std::optional<long long> swap_distance(const PreferenceList & a, const PreferenceList & b)
{
    std::vector<int> items = a.flatten();
    std::sort(items.begin(), items.end());
    {
        std::vector<int> other = b.flatten();
        std::sort(other.begin(), other.end());
        if (items != other)
            return std::nullopt;
    }
    if (items.empty())
        return 0;

    const int max_idx = items.back() + 1;
    std::vector<int> ra(max_idx, -1), rb(max_idx, -1);
    for (std::size_t g = 0; g < a.tie_groups.size(); ++g)
        for (int x : a.tie_groups[g])
            ra[x] = static_cast<int>(g);
    for (std::size_t g = 0; g < b.tie_groups.size(); ++g)
        for (int x : b.tie_groups[g])
            rb[x] = static_cast<int>(g);

    long long d = 0;
    for (std::size_t i = 0; i < items.size(); ++i)
        for (std::size_t j = i + 1; j < items.size(); ++j) {
            const int x = items[i], y = items[j];
            if (ra[x] == ra[y]) {
                if (rb[x] != rb[y])
                    ++d;
            }
            else {
                // strict in a; discordant when b weakly reverses it
                const bool a_prefers_x = ra[x] < ra[y];
                const bool b_weakly_reverses = a_prefers_x ? rb[y] <= rb[x] : rb[x] <= rb[y];
                if (b_weakly_reverses)
                    ++d;
            }
        }
    return d;
}

// Summed per-agent swap distance |P1 (+) P2|; nullopt means infinity.
inline std::optional<long long> profile_distance(const PreferenceProfile & p1, const PreferenceProfile & p2)
{
    if (p1.n_left() != p2.n_left() || p1.n_right() != p2.n_right())
        throw Error("profiles are over different agent index spaces");
    long long total = 0;
    for (int m = 0; m < p1.n_left(); ++m) {
        auto d = swap_distance(p1.left[m], p2.left[m]);
        if (! d)
            return std::nullopt;
        total += *d;
    }
    for (int w = 0; w < p1.n_right(); ++w) {
        auto d = swap_distance(p1.right[w], p2.right[w]);
        if (! d)
            return std::nullopt;
        total += *d;
    }
    return total;
}

inline long long symmetric_difference_count(const Matching & m1, const Matching & m2)
{
    long long common = 0;
    for (const auto & pr : m1.pairs)
        if (m2.contains(pr.first, pr.second))
            ++common;
    return m1.size() + m2.size() - 2 * common;
}

// Normalisation divides by the stable matching sizes of the two profiles,
// which the caller supplies (they are matching-independent by the Rural
// Hospitals theorem).
inline double normalized_symmetric_difference(long long count, long long stable_size_1, long long stable_size_2)
{
    if (stable_size_1 + stable_size_2 == 0)
        throw ZeroDenominator("both profiles have empty stable matchings");
    return static_cast<double>(count) / static_cast<double>(stable_size_1 + stable_size_2);
}

// M restricted to pairs that are still mutually acceptable in p.
inline Matching restrict_to_acceptable(const Matching & m, const PreferenceProfile & p)
{
    RankTable ranks(p);
    Matching out;
    for (auto [l, r] : m.pairs)
        if (l < p.n_left() && r < p.n_right() && ranks.mutually_acceptable(l, r))
            out.pairs.emplace_back(l, r);
    out.normalise();
    return out;
}

inline long long count_acceptable_pairs(const PreferenceProfile & p)
{
    RankTable ranks(p);
    long long n = 0;
    for (int m = 0; m < p.n_left(); ++m)
        for (int w = 0; w < p.n_right(); ++w)
            if (ranks.mutually_acceptable(m, w))
                ++n;
    return n;
}

inline std::vector<std::pair<int, int>> acceptable_pairs(const PreferenceProfile & p)
{
    RankTable ranks(p);
    std::vector<std::pair<int, int>> out;
    for (int m = 0; m < p.n_left(); ++m)
        for (int w = 0; w < p.n_right(); ++w)
            if (ranks.mutually_acceptable(m, w))
                out.emplace_back(m, w);
    return out;
}

// Blocking pairs of a matching that may contain pairs no longer acceptable
// in p (e.g. the old matching after deletions): drops those pairs first.
inline std::vector<std::pair<int, int>> blocking_pairs_of_old_matching(const Matching & m, const PreferenceProfile & p)
{
    return blocking_pairs(restrict_to_acceptable(m, p), p);
}

} // namespace matchshift
