#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <matchshift/changes.hpp>
#include <matchshift/rng.hpp>
#include <matchshift/sampling.hpp>

#include <algorithm>

using namespace matchshift;

TEST_CASE("r = 0 is the identity with an empty script")
{
    auto p = sample_uniform_profile(5, 5, 3);
    for (auto kind : {ChangeKind::Reorder, ChangeKind::ReorderInverse, ChangeKind::Delete, ChangeKind::Add}) {
        auto [p2, script] = apply_changes(p, kind, 0.0, 17);
        CHECK(p2 == p);
        CHECK(script.affected.empty());
    }
    // swaps touches every list, but at distance zero
    auto [p2, script] = apply_changes(p, ChangeKind::Swaps, 0.0, 17);
    CHECK(p2 == p);
}

TEST_CASE("fraction bounds are enforced")
{
    auto p = sample_uniform_profile(3, 3, 5);
    CHECK_THROWS_AS(apply_changes(p, ChangeKind::Reorder, -0.1, 1), FractionOutOfRange);
    CHECK_THROWS_AS(apply_changes(p, ChangeKind::Reorder, 1.5, 1), FractionOutOfRange);
}

TEST_CASE("delete: a 0.01 fraction of 100 agents removes exactly one")
{
    auto p = sample_uniform_profile(50, 50, 7);
    auto [p2, script] = apply_changes(p, ChangeKind::Delete, 0.01, 23);
    REQUIRE(script.affected.size() == 1);
    const auto victim = script.affected[0].agent;
    CHECK(p2.list_of(victim.side, victim.index).empty());

    // nobody else lists the deleted agent
    const auto & other_side = victim.side == Side::Left ? p2.right : p2.left;
    for (const auto & l : other_side)
        for (int x : l.flatten())
            CHECK(x != victim.index);
    // and everyone else keeps a full list over the surviving agents
    const auto & same_side = victim.side == Side::Left ? p2.left : p2.right;
    for (int i = 0; i < static_cast<int>(same_side.size()); ++i)
        if (i != victim.index)
            CHECK(same_side[i].entry_count() == 50);
}

TEST_CASE("swaps: per-list distance follows round(r * L(L-1)/2)")
{
    auto p = sample_uniform_profile(50, 50, 11);
    auto [p2, script] = apply_changes(p, ChangeKind::Swaps, 0.01, 29);
    // 0.01 of 1225 possible swaps rounds to 12 per preference order
    long long total = 0;
    for (int m = 0; m < 50; ++m) {
        auto d = swap_distance(p.left[m], p2.left[m]);
        REQUIRE(d.has_value());
        CHECK(*d == 12);
        total += *d;
    }
    for (int w = 0; w < 50; ++w) {
        auto d = swap_distance(p.right[w], p2.right[w]);
        REQUIRE(d.has_value());
        CHECK(*d == 12);
        total += *d;
    }
    CHECK(profile_distance(p, p2) == total);
}

TEST_CASE("reorder and reorder-inverse touch round(r * |A|) agents")
{
    auto p = sample_uniform_profile(10, 10, 13);
    auto [p2, script] = apply_changes(p, ChangeKind::Reorder, 0.25, 31);
    CHECK(script.affected.size() == 5);

    auto [p3, script3] = apply_changes(p, ChangeKind::ReorderInverse, 0.1, 31);
    CHECK(script3.affected.size() == 2);
    for (const auto & edit : script3.affected) {
        auto orig = p.list_of(edit.agent.side, edit.agent.index).flatten();
        std::reverse(orig.begin(), orig.end());
        CHECK(p3.list_of(edit.agent.side, edit.agent.index).flatten() == orig);
    }
}

TEST_CASE("add: conventions for the new agents")
{
    auto p = sample_uniform_profile(4, 4, 17);
    auto [p2, script] = apply_changes(p, ChangeKind::Add, 0.25, 37); // two new agents
    REQUIRE(script.affected.size() == 2);
    CHECK(script.affected[0].agent.side == Side::Left);
    CHECK(script.affected[1].agent.side == Side::Right);
    CHECK(p2.n_left() == 5);
    CHECK(p2.n_right() == 5);

    auto p1 = extend_for_add(p, script);
    CHECK(p1.n_left() == 5);
    CHECK(p1.n_right() == 5);
    for (const auto & edit : script.affected) {
        CHECK(p1.list_of(edit.agent.side, edit.agent.index).empty()); // empty in P1
        CHECK(! p2.list_of(edit.agent.side, edit.agent.index).empty());
    }
    // every opposite-side list gained exactly the new agent
    for (int w = 0; w < 4; ++w)
        CHECK(p2.right[w].entry_count() == 5);
    // the added right agent is listed by the added left agent too
    CHECK(p2.left[4].entry_count() == 5);
}

TEST_CASE("same seed, same result; different seed, different result")
{
    auto p = sample_uniform_profile(8, 8, 19);
    for (auto kind : {ChangeKind::Reorder, ChangeKind::Delete, ChangeKind::Swaps, ChangeKind::Add}) {
        auto a = apply_changes(p, kind, 0.2, 41).first;
        auto b = apply_changes(p, kind, 0.2, 41).first;
        CHECK(a == b);
    }
    CHECK(apply_changes(p, ChangeKind::Reorder, 0.5, 1).first != apply_changes(p, ChangeKind::Reorder, 0.5, 2).first);
}

TEST_CASE("replay reproduces P2 exactly")
{
    Rng rng(43);
    for (int trial = 0; trial < 40; ++trial) {
        auto p = sample_uniform_profile(2 + rng.below_int(6), 2 + rng.below_int(6), rng.next_u64());
        for (auto kind : {ChangeKind::Reorder, ChangeKind::ReorderInverse, ChangeKind::Delete, ChangeKind::Swaps, ChangeKind::Add}) {
            auto [p2, script] = apply_changes(p, kind, 0.3, rng.next_u64());
            CHECK(replay(p, script) == p2);
        }
    }

    // empty script: identity
    auto p = sample_uniform_profile(4, 4, 47);
    auto [p2, script] = apply_changes(p, ChangeKind::Reorder, 0.0, 1);
    CHECK(replay(p, script) == p);
}

TEST_CASE("replay refuses a permuted profile")
{
    auto p = sample_uniform_profile(4, 4, 53);
    auto [p2, script] = apply_changes(p, ChangeKind::Reorder, 0.5, 59);
    auto permuted = p;
    std::swap(permuted.left[0], permuted.left[1]);
    CHECK_THROWS_AS(replay(permuted, script), ScriptMismatch);
}

TEST_CASE("change operators require strict lists")
{
    PreferenceProfile p = PreferenceProfile::sm(2, 2);
    p.left[0].tie_groups = {{0, 1}};
    p.left[1] = PreferenceList::strict_order({0, 1});
    p.right[0] = PreferenceList::strict_order({0, 1});
    p.right[1] = PreferenceList::strict_order({0, 1});
    p = validate_and_normalize(p);
    CHECK_THROWS_AS(apply_changes(p, ChangeKind::Reorder, 0.5, 1), TiesUnsupported);
}
