#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <matchshift/core.hpp>
#include <matchshift/gale_shapley.hpp>
#include <matchshift/io.hpp>
#include <matchshift/rng.hpp>
#include <matchshift/sampling.hpp>

#include <algorithm>
#include <map>
#include <queue>
#include <set>

using namespace matchshift;

namespace {

PreferenceProfile profile_from(const std::vector<std::vector<int>> & left, const std::vector<std::vector<int>> & right)
{
    PreferenceProfile p = PreferenceProfile::sm(static_cast<int>(left.size()), static_cast<int>(right.size()));
    for (std::size_t m = 0; m < left.size(); ++m)
        p.left[m] = PreferenceList::strict_order(left[m]);
    for (std::size_t w = 0; w < right.size(); ++w)
        p.right[w] = PreferenceList::strict_order(right[w]);
    return validate_and_normalize(p);
}

Matching matching_of(std::vector<std::pair<int, int>> pairs)
{
    Matching m;
    m.pairs = std::move(pairs);
    m.normalise();
    return m;
}

// all strict orders of 0..n-1
std::vector<std::vector<int>> all_orders(int n)
{
    std::vector<int> base(n);
    for (int i = 0; i < n; ++i)
        base[i] = i;
    std::vector<std::vector<int>> out;
    do
        out.push_back(base);
    while (std::next_permutation(base.begin(), base.end()));
    return out;
}

long long strict_swap_distance(const std::vector<int> & a, const std::vector<int> & b)
{
    auto la = PreferenceList::strict_order(a), lb = PreferenceList::strict_order(b);
    auto d = swap_distance(la, lb);
    REQUIRE(d.has_value());
    return *d;
}

} // namespace

TEST_CASE("validate_and_normalize intersects acceptability")
{
    // m1 lists w1, w1 lists m1: unchanged
    PreferenceProfile p = PreferenceProfile::sm(1, 1);
    p.left[0] = PreferenceList::strict_order({0});
    p.right[0] = PreferenceList::strict_order({0});
    auto q = validate_and_normalize(p);
    CHECK(q.left[0].flatten() == std::vector<int>{0});

    // m1 lists w1, w1 lists nothing: m1's list becomes empty
    p.right[0].tie_groups.clear();
    q = validate_and_normalize(p);
    CHECK(q.left[0].empty());
    CHECK(q.right[0].empty());
}

TEST_CASE("validate_and_normalize rejects bad input")
{
    PreferenceProfile p = PreferenceProfile::sm(1, 2);
    p.left[0].tie_groups = {{0}, {0}}; // w1 twice
    p.right[0] = PreferenceList::strict_order({0});
    p.right[1] = PreferenceList::strict_order({0});
    CHECK_THROWS_AS(validate_and_normalize(p), DuplicateEntry);

    PreferenceProfile q = PreferenceProfile::sm(1, 1);
    q.left[0] = PreferenceList::strict_order({3});
    CHECK_THROWS_AS(validate_and_normalize(q), IndexOutOfRange);

    PreferenceProfile h = PreferenceProfile::hr(1, 1, {0});
    CHECK_THROWS_AS(validate_and_normalize(h), ZeroCapacity);
}

TEST_CASE("blocking pairs, the worked example")
{
    // m1: w1 > w2; m2: w1 > w2; w1: m1 > m2; w2: m1 > m2, M = {m1w2, m2w1}
    auto p = profile_from({{0, 1}, {0, 1}}, {{0, 1}, {0, 1}});
    auto m = matching_of({{0, 1}, {1, 0}});
    auto bp = blocking_pairs(m, p);
    CHECK(bp == std::vector<std::pair<int, int>>{{0, 0}});
    CHECK_FALSE(is_stable(m, p));
}

TEST_CASE("stable matchings have no blockers; empty instances are stable")
{
    Rng rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        auto p = sample_uniform_profile(2 + rng.below_int(5), 2 + rng.below_int(5), rng.next_u64());
        auto m = gale_shapley(p, Side::Left);
        CHECK(blocking_pairs(m, p).empty());
    }

    PreferenceProfile empty = PreferenceProfile::sm(2, 2);
    CHECK(is_stable(Matching{}, empty));

    // n=1 complete preferences, empty matching: the single pair blocks
    auto p1 = profile_from({{0}}, {{0}});
    CHECK(blocking_pairs(Matching{}, p1) == std::vector<std::pair<int, int>>{{0, 0}});
}

TEST_CASE("blocking_pairs rejects invalid matchings")
{
    auto p = profile_from({{0}}, {{0}});
    Matching bad = matching_of({{0, 0}});
    PreferenceProfile q = p;
    q.left[0].tie_groups.clear();
    q = validate_and_normalize(q);
    CHECK_THROWS_AS(blocking_pairs(bad, q), InvalidPair);
}

TEST_CASE("HR blocking honours capacities")
{
    // one hospital with quota 2, three residents, h prefers r1 > r2 > r3
    PreferenceProfile p = PreferenceProfile::hr(3, 1, {2});
    for (int r = 0; r < 3; ++r)
        p.left[r] = PreferenceList::strict_order({0});
    p.right[0] = PreferenceList::strict_order({0, 1, 2});
    p = validate_and_normalize(p);

    // under-capacity: an acceptable unmatched resident blocks
    auto m = matching_of({{0, 0}});
    auto bp = blocking_pairs(m, p);
    CHECK(bp == std::vector<std::pair<int, int>>{{1, 0}, {2, 0}});

    // full with r2, r3: r1 blocks because h prefers it to one of them
    m = matching_of({{1, 0}, {2, 0}});
    bp = blocking_pairs(m, p);
    CHECK(bp == std::vector<std::pair<int, int>>{{0, 0}});

    // full with its two favourites: stable
    m = matching_of({{0, 0}, {1, 0}});
    CHECK(is_stable(m, p));
}

TEST_CASE("swap distance basics")
{
    auto a = PreferenceList::strict_order({0, 1, 2});
    CHECK(swap_distance(a, a) == 0);

    auto rev = PreferenceList::strict_order({2, 1, 0});
    CHECK(swap_distance(a, rev) == 3);

    PreferenceList tied;
    tied.tie_groups = {{0, 1}};
    auto strict = PreferenceList::strict_order({0, 1});
    CHECK(swap_distance(tied, strict) == 1);
    CHECK(swap_distance(strict, tied) == 1);

    auto other_set = PreferenceList::strict_order({0, 2});
    CHECK_FALSE(swap_distance(a, other_set).has_value());
}

TEST_CASE("swap distance equals minimum adjacent transpositions (BFS over S4)")
{
    auto orders = all_orders(4);
    std::map<std::vector<int>, int> dist;
    std::queue<std::vector<int>> queue;
    dist[orders[0]] = 0; // identity
    queue.push(orders[0]);
    while (! queue.empty()) {
        auto cur = queue.front();
        queue.pop();
        for (int i = 0; i + 1 < 4; ++i) {
            auto nxt = cur;
            std::swap(nxt[i], nxt[i + 1]);
            if (! dist.count(nxt)) {
                dist[nxt] = dist[cur] + 1;
                queue.push(nxt);
            }
        }
    }
    for (const auto & o : orders)
        CHECK(strict_swap_distance(orders[0], o) == dist[o]);
}

TEST_CASE("swap distance is symmetric and satisfies the triangle inequality")
{
    for (int n = 2; n <= 4; ++n) {
        auto orders = all_orders(n);
        for (const auto & a : orders)
            for (const auto & b : orders) {
                CHECK(strict_swap_distance(a, b) == strict_swap_distance(b, a));
                for (const auto & c : orders)
                    CHECK(strict_swap_distance(a, c) <= strict_swap_distance(a, b) + strict_swap_distance(b, c));
            }
    }
}

TEST_CASE("profile distance")
{
    auto p1 = profile_from({{0, 1}, {0, 1}}, {{0, 1}, {0, 1}});
    CHECK(profile_distance(p1, p1) == 0);

    auto p2 = p1;
    p2.left[0] = PreferenceList::strict_order({1, 0});
    CHECK(profile_distance(p1, p2) == 1);

    auto p3 = p1;
    p3.left[0] = PreferenceList::strict_order({0});
    p3 = validate_and_normalize(p3);
    CHECK_FALSE(profile_distance(p1, p3).has_value());
}

TEST_CASE("symmetric difference and its normalisation")
{
    auto m = matching_of({{0, 0}, {1, 1}});
    CHECK(symmetric_difference_count(m, m) == 0);

    auto disjoint = matching_of({{0, 1}, {1, 0}});
    CHECK(symmetric_difference_count(m, disjoint) == 4);
    CHECK(normalized_symmetric_difference(4, 2, 2) == doctest::Approx(1.0));

    auto m1 = matching_of({{0, 0}});
    auto m2 = matching_of({{0, 1}, {1, 0}});
    CHECK(symmetric_difference_count(m1, m2) == 3);
    CHECK(normalized_symmetric_difference(3, 1, 2) == doctest::Approx(1.0));

    CHECK_THROWS_AS(normalized_symmetric_difference(0, 0, 0), ZeroDenominator);
}

TEST_CASE("symmetric difference identity on random matchings")
{
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + rng.below_int(6);
        auto draw = [&]() {
            Matching m;
            auto right = random_order(n, rng);
            for (int l = 0; l < n; ++l)
                if (rng.below(2))
                    m.pairs.emplace_back(l, right[l]);
            m.normalise();
            return m;
        };
        auto a = draw(), b = draw();
        long long common = 0;
        for (auto pr : a.pairs)
            if (b.contains(pr.first, pr.second))
                ++common;
        CHECK(symmetric_difference_count(a, b) == a.size() + b.size() - 2 * common);
    }
}

TEST_CASE("blocking pairs are acceptable non-matching pairs")
{
    Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + rng.below_int(4);
        auto p = sample_uniform_profile(n, n, rng.next_u64());
        Matching m;
        auto right = random_order(n, rng);
        for (int l = 0; l < n; ++l)
            if (rng.below(2))
                m.pairs.emplace_back(l, right[l]);
        m.normalise();
        RankTable ranks(p);
        for (auto [l, r] : blocking_pairs(m, p)) {
            CHECK(ranks.mutually_acceptable(l, r));
            CHECK_FALSE(m.contains(l, r));
        }
    }
}

TEST_CASE("profile text round trip")
{
    const std::string text = "sm 3 3\n"
                             "m1: w2 (w1 w3)\n"
                             "m2: w1 w2 w3\n"
                             "m3:\n"
                             "w1: m1 m2\n"
                             "w2: (m1 m2)\n"
                             "w3: m1\n";
    auto p = parse_profile(text);
    CHECK(p.left[0].tie_groups == std::vector<TieGroup>{{1}, {0, 2}});
    CHECK(p.left[2].empty());
    // w3 lists m1 but m3's list is empty; w2 keeps only mutual entries
    CHECK(p.right[2].flatten() == std::vector<int>{0});

    auto q = parse_profile(serialize_profile(p));
    CHECK(p == q);
}

TEST_CASE("random profiles survive a serialisation round trip")
{
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        auto p = sample_uniform_profile(1 + rng.below_int(6), 1 + rng.below_int(6), rng.next_u64());
        CHECK(parse_profile(serialize_profile(p)) == p);
    }
}

TEST_CASE("HR profile text carries quotas")
{
    const std::string text = "hr 2 2\n"
                             "m1: h1 h2\n"
                             "m2: h1\n"
                             "h1[2]: m1 m2\n"
                             "h2[1]: m1\n";
    auto p = parse_profile(text);
    CHECK(p.mode == Mode::HR);
    CHECK(p.capacities == std::vector<int>{2, 1});
    CHECK(parse_profile(serialize_profile(p)) == p);
}

TEST_CASE("instance pair text round trip")
{
    InstancePair pair;
    pair.profile1 = profile_from({{0, 1}, {0, 1}}, {{0, 1}, {0, 1}});
    pair.profile2 = profile_from({{1, 0}, {0, 1}}, {{0, 1}, {0, 1}});
    pair.matching1 = matching_of({{0, 0}, {1, 1}});
    pair.budget_k = 2;
    pair.budget_b = 1;
    auto text = serialize_instance_pair(pair);
    auto back = parse_instance_pair(text);
    CHECK(back.profile1 == pair.profile1);
    CHECK(back.profile2 == pair.profile2);
    CHECK(back.matching1 == pair.matching1);
    CHECK(back.budget_k == 2);
    CHECK(back.budget_b == 1);
}

TEST_CASE("parser rejects malformed input")
{
    CHECK_THROWS_AS(parse_profile("bogus 2 2\n"), ParseError);
    CHECK_THROWS_AS(parse_profile("sm 2 2\nm1 w1\n"), ParseError);           // missing colon
    CHECK_THROWS_AS(parse_profile("sm 2 2\nm1: w9\n"), IndexOutOfRange);
    CHECK_THROWS_AS(parse_profile("sm 2 2\nm1: (w1 w2\n"), ParseError);      // unterminated tie
    CHECK_THROWS_AS(parse_profile("sm 2 2\nw1[2]: m1\n"), ParseError);       // quota in SM mode
    CHECK_THROWS_AS(parse_instance_pair("#profile1\nsm 1 1\nm1: w1\nw1: m1\n"), ParseError); // no profile2
    CHECK_THROWS_AS(parse_instance_pair("#profile1\nsm 1 1\nm1: w1\nw1: m1\n"
                                        "#profile2\nsm 1 1\nm1: w1\nw1: m1\n"
                                        "#matching1\n"),
                    ParseError); // missing k=

    // matching1 must be stable in profile1
    const std::string unstable = "#profile1\nsm 1 1\nm1: w1\nw1: m1\n"
                                 "#profile2\nsm 1 1\nm1: w1\nw1: m1\n"
                                 "#matching1\nk=0\n";
    CHECK_THROWS_AS(parse_instance_pair(unstable), ParseError);
}

TEST_CASE("gale_shapley worked examples")
{
    // m1: w1>w2; m2: w1>w2; w1: m2>m1; w2: m1>m2
    auto p = profile_from({{0, 1}, {0, 1}}, {{1, 0}, {0, 1}});
    CHECK(gale_shapley(p, Side::Left) == matching_of({{0, 1}, {1, 0}}));
    CHECK(gale_shapley(p, Side::Right) == matching_of({{0, 1}, {1, 0}}));

    auto single = profile_from({{0}}, {{0}});
    CHECK(gale_shapley(single, Side::Left) == matching_of({{0, 0}}));

    PreferenceProfile tied = PreferenceProfile::sm(2, 2);
    tied.left[0].tie_groups = {{0, 1}};
    tied.left[1] = PreferenceList::strict_order({0, 1});
    tied.right[0] = PreferenceList::strict_order({0, 1});
    tied.right[1] = PreferenceList::strict_order({0, 1});
    CHECK_THROWS_AS(gale_shapley(validate_and_normalize(tied), Side::Left), TiesUnsupported);
}

TEST_CASE("gale_shapley is stable on many random instances")
{
    Rng rng(23);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + rng.below_int(49);
        auto p = sample_uniform_profile(n, n, rng.next_u64());
        auto m = gale_shapley(p, Side::Left);
        CHECK(blocking_pairs(m, p).empty());
    }
}
