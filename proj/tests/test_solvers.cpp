#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <matchshift/changes.hpp>
#include <matchshift/gale_shapley.hpp>
#include <matchshift/oracle.hpp>
#include <matchshift/rng.hpp>
#include <matchshift/rotations.hpp>
#include <matchshift/sampling.hpp>
#include <matchshift/solvers.hpp>

#include <algorithm>
#include <limits>
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

InstancePair random_pair(Rng & rng, int n, bool fresh_p2 = true)
{
    InstancePair pair;
    pair.profile1 = sample_uniform_profile(n, n, rng.next_u64());
    pair.profile2 = fresh_p2 ? sample_uniform_profile(n, n, rng.next_u64()) : pair.profile1;
    pair.matching1 = gale_shapley(pair.profile1, Side::Left);
    return pair;
}

} // namespace

TEST_CASE("rotation poset: unique stable matching means no rotations")
{
    auto p = profile_from({{0, 1}, {0, 1}}, {{0, 1}, {0, 1}});
    auto poset = build_rotation_poset(p);
    CHECK(poset.rotations.empty());
    CHECK(poset.men_optimal == gale_shapley(p, Side::Left));
}

TEST_CASE("rotation poset: the two-stable instance has exactly one rotation")
{
    auto p = profile_from({{0, 1}, {1, 0}}, {{1, 0}, {0, 1}});
    auto poset = build_rotation_poset(p);
    REQUIRE(poset.rotations.size() == 1);
    auto both = enumerate_stable_from_poset(poset);
    CHECK(both.size() == 2);
    CHECK(both.front() != both.back());
}

TEST_CASE("closed subsets enumerate exactly the stable matchings")
{
    Rng rng(59);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + rng.below_int(5); // up to 6 per side
        auto p = sample_uniform_profile(n, n, rng.next_u64());
        auto poset = build_rotation_poset(p);
        auto from_poset = enumerate_stable_from_poset(poset);
        auto from_oracle = enumerate_stable_matchings(p);
        REQUIRE(from_poset.size() == from_oracle.size());
        CHECK(from_poset == from_oracle);
    }
}

TEST_CASE("max-weight stable matching")
{
    auto p = profile_from({{0, 1}, {1, 0}}, {{1, 0}, {0, 1}});

    // all weights zero: men-optimal comes back
    CHECK(max_weight_stable_matching(p, EdgeWeights(2, 2)) == gale_shapley(p, Side::Left));

    // weight 1 on the women-optimal pairs selects them
    EdgeWeights w(2, 2);
    w.weight[0][1] = 1;
    w.weight[1][0] = 1;
    CHECK(max_weight_stable_matching(p, w) == matching_of({{0, 1}, {1, 0}}));
}

TEST_CASE("max-weight stable matching maximises |M cap M1| against the oracle")
{
    Rng rng(61);
    for (int trial = 0; trial < 120; ++trial) {
        const int n = 2 + rng.below_int(5);
        auto p1 = sample_uniform_profile(n, n, rng.next_u64());
        auto p2 = sample_uniform_profile(n, n, rng.next_u64());
        auto m1 = gale_shapley(p1, Side::Left);

        EdgeWeights w(n, n);
        RankTable ranks(p2);
        for (auto [m, ww] : m1.pairs)
            if (ranks.mutually_acceptable(m, ww))
                w.weight[m][ww] = 2;
        auto res = max_weight_stable_matching_full(p2, w);

        long long best_overlap = -1;
        for (const auto & s : enumerate_stable_matchings(p2)) {
            long long overlap = 0;
            for (auto pr : s.pairs)
                if (m1.contains(pr.first, pr.second))
                    ++overlap;
            best_overlap = std::max(best_overlap, overlap);
        }
        CHECK(res.weight == 2 * best_overlap);
        CHECK(is_stable(res.matching, p2));
    }
}

TEST_CASE("solve_ism worked examples")
{
    // unchanged profile: keep matching1 at distance zero
    auto p = profile_from({{0, 1}, {1, 0}}, {{1, 0}, {0, 1}});
    InstancePair pair;
    pair.profile1 = p;
    pair.profile2 = p;
    pair.matching1 = gale_shapley(p, Side::Left);
    auto res = solve_ism(pair, Objective::Minimize);
    CHECK(res.count == 0);
    CHECK(res.matching == pair.matching1);

    auto worst = solve_ism(pair, Objective::Maximize);
    CHECK(worst.count == 4);
    CHECK(worst.matching != pair.matching1);
}

TEST_CASE("solve_ism matches the oracle on random instances, both objectives")
{
    Rng rng(67);
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 2 + rng.below_int(5);
        auto pair = random_pair(rng, n, trial % 2 == 0);
        if (trial % 3 == 1) {
            // also exercise deletion-shaped changes
            auto [p2, script] = apply_changes(pair.profile1, ChangeKind::Delete, 0.2, rng.next_u64());
            pair.profile2 = p2;
        }
        CHECK(solve_ism(pair, Objective::Minimize).count == oracle_ism(pair, Objective::Minimize));
        CHECK(solve_ism(pair, Objective::Maximize).count == oracle_ism(pair, Objective::Maximize));
    }
}

TEST_CASE("solve_ism agrees with an independent exhaustive search beyond oracle sizes")
{
    // the IASM branch and bound with b=0 enumerates the stable matchings of
    // P2 itself; seeding its incumbent from the rerun deferred-acceptance
    // matching keeps it independent of the rotation machinery under test
    Rng rng(211);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 10 + rng.below_int(5); // up to n=14 per side
        auto p1 = sample_uniform_profile(n, n, rng.next_u64());
        auto m1 = gale_shapley(p1, Side::Left);
        ChangeKind kinds[] = {ChangeKind::Reorder, ChangeKind::Delete, ChangeKind::Swaps};
        auto [p2, script] = apply_changes(p1, kinds[rng.below(3)], 0.1 + rng.unit() * 0.2, rng.next_u64());

        iasm_detail::BranchAndBound bb(p2, m1, 0, 50'000'000);
        auto gs2 = gale_shapley(p2, Side::Left);
        bb.best_count = symmetric_difference_count(m1, gs2);
        bb.best_assign = gs2.left_partner(p2.n_left());
        bb.search(0);
        REQUIRE_FALSE(bb.exceeded);

        InstancePair pair{p1, p2, m1, 0, 0};
        auto res = solve_ism(pair, Objective::Minimize);
        CHECK(res.count == bb.best_count);
        CHECK(is_stable(res.matching, p2));
    }
}

TEST_CASE("solve_ism results are stable at experiment scale")
{
    Rng rng(223);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 30 + rng.below_int(41); // 30..70
        auto p1 = sample_uniform_profile(n, n, rng.next_u64());
        auto m1 = gale_shapley(p1, Side::Left);
        ChangeKind kinds[] = {ChangeKind::Reorder, ChangeKind::Delete, ChangeKind::Swaps};
        auto [p2, script] = apply_changes(p1, kinds[rng.below(3)], rng.unit() * 0.3, rng.next_u64());
        InstancePair pair{p1, p2, m1, 0, 0};
        auto lo = solve_ism(pair, Objective::Minimize);
        auto hi = solve_ism(pair, Objective::Maximize);
        CHECK(is_stable(lo.matching, p2));
        CHECK(is_stable(hi.matching, p2));
        CHECK(lo.count <= hi.count);
        auto gs = symmetric_difference_count(m1, gale_shapley(p2, Side::Left));
        CHECK(lo.count <= gs);
        CHECK(gs <= hi.count);
    }
}

TEST_CASE("min and max bracket the rerun Gale-Shapley matching")
{
    Rng rng(71);
    for (int trial = 0; trial < 60; ++trial) {
        auto pair = random_pair(rng, 2 + rng.below_int(8));
        auto lo = solve_ism(pair, Objective::Minimize).count;
        auto hi = solve_ism(pair, Objective::Maximize).count;
        auto gs = symmetric_difference_count(pair.matching1, gale_shapley(pair.profile2, Side::Left));
        CHECK(lo <= gs);
        CHECK(gs <= hi);
    }
}

TEST_CASE("rural hospitals: all stable matchings match the same agents")
{
    Rng rng(73);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + rng.below_int(4);
        auto p = sample_uniform_profile(n, n, rng.next_u64());
        // thin the lists so some agents can stay unmatched
        for (auto * side : {&p.left, &p.right})
            for (auto & l : *side)
                if (l.tie_groups.size() > 1 && rng.below(2))
                    l.tie_groups.resize(1 + rng.below(l.tie_groups.size()));
        p = validate_and_normalize(p);
        auto all = enumerate_stable_matchings(p);
        REQUIRE(! all.empty());
        std::set<std::vector<int>> matched_sets;
        for (const auto & m : all) {
            std::vector<int> matched;
            for (auto [l, r] : m.pairs) {
                matched.push_back(l);
                matched.push_back(r + 1000);
            }
            std::sort(matched.begin(), matched.end());
            matched_sets.insert(matched);
        }
        CHECK(matched_sets.size() == 1);
    }
}

TEST_CASE("solve_ihr worked examples")
{
    // quota 2 hospital, nothing changes
    PreferenceProfile p = PreferenceProfile::hr(2, 1, {2});
    p.left[0] = PreferenceList::strict_order({0});
    p.left[1] = PreferenceList::strict_order({0});
    p.right[0] = PreferenceList::strict_order({0, 1});
    p = validate_and_normalize(p);
    InstancePair pair;
    pair.profile1 = p;
    pair.profile2 = p;
    pair.matching1 = matching_of({{0, 0}, {1, 0}});
    auto res = solve_ihr(pair);
    CHECK(res.count == 0);
    CHECK(res.matching == pair.matching1);
}

TEST_CASE("solve_ihr equals solve_ism on quota-1 instances, pair for pair")
{
    Rng rng(79);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + rng.below_int(4);
        auto sm_pair = random_pair(rng, n);
        InstancePair hr_pair = sm_pair;
        for (auto * prof : {&hr_pair.profile1, &hr_pair.profile2}) {
            prof->mode = Mode::HR;
            prof->capacities.assign(n, 1);
        }
        auto hr = solve_ihr(hr_pair);
        auto sm = solve_ism(sm_pair, Objective::Minimize);
        CHECK(hr.count == sm.count);
        CHECK(hr.matching == sm.matching);
    }
}

TEST_CASE("solve_ihr matches the HR oracle on random quota instances")
{
    Rng rng(83);
    for (int trial = 0; trial < 200; ++trial) {
        const int residents = 4, hospitals = 2;
        std::vector<int> quotas = {1 + rng.below_int(2), 1 + rng.below_int(2)};
        auto draw = [&]() {
            PreferenceProfile p = PreferenceProfile::hr(residents, hospitals, quotas);
            for (int r = 0; r < residents; ++r)
                p.left[r] = PreferenceList::strict_order(random_order(hospitals, rng));
            for (int h = 0; h < hospitals; ++h)
                p.right[h] = PreferenceList::strict_order(random_order(residents, rng));
            return validate_and_normalize(p);
        };
        InstancePair pair;
        pair.profile1 = draw();
        pair.profile2 = draw();
        auto stable1 = enumerate_stable_matchings(pair.profile1);
        REQUIRE(! stable1.empty());
        pair.matching1 = stable1[rng.below(stable1.size())];
        CHECK(solve_ihr(pair).count == oracle_ihrt(pair));
    }
}

TEST_CASE("solve_iasm_exact worked examples")
{
    Rng rng(89);
    auto pair = random_pair(rng, 5);

    // enough budget: keeping matching1 is optimal
    auto bp = blocking_pairs_of_old_matching(pair.matching1, pair.profile2);
    pair.budget_b = static_cast<long long>(bp.size());
    auto res = solve_iasm_exact(pair);
    CHECK(res.count == 0);
    CHECK(res.blockers == bp);

    // b = 0 equals solve_ism
    pair.budget_b = 0;
    CHECK(solve_iasm_exact(pair).count == solve_ism(pair, Objective::Minimize).count);
}

TEST_CASE("solve_iasm_exact equals the oracle for b in 0..3")
{
    Rng rng(97);
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 2 + rng.below_int(5); // up to 6 per side
        auto pair = random_pair(rng, n);
        auto counts = oracle_iasm_counts(pair, 3);
        for (int b = 0; b <= 3; ++b) {
            pair.budget_b = b;
            auto res = solve_iasm_exact(pair);
            REQUIRE(res.status == SolveStatus::Optimal);
            CHECK(res.count == counts[b]);
            CHECK(static_cast<long long>(res.blockers.size()) <= b);
        }
    }
}

TEST_CASE("solve_iasm_exact count is non-increasing in b")
{
    Rng rng(101);
    for (int trial = 0; trial < 25; ++trial) {
        auto pair = random_pair(rng, 5);
        long long prev = std::numeric_limits<long long>::max();
        for (int b = 0; b <= 4; ++b) {
            pair.budget_b = b;
            auto count = solve_iasm_exact(pair).count;
            CHECK(count <= prev);
            prev = count;
        }
    }
}

TEST_CASE("solve_iasm_xp_b agrees with the exact solver")
{
    Rng rng(103);
    for (int trial = 0; trial < 100; ++trial) {
        auto pair = random_pair(rng, 2 + rng.below_int(4)); // n <= 5
        pair.budget_b = rng.below_int(3);
        auto exact = solve_iasm_exact(pair);
        auto xp = solve_iasm_xp_b(pair);
        CHECK(xp.count == exact.count);
        CHECK(static_cast<long long>(xp.blockers.size()) <= pair.budget_b);
    }
}

TEST_CASE("solve_iasm_xp_b refuses oversized enumerations")
{
    Rng rng(107);
    auto pair = random_pair(rng, 6);
    pair.budget_b = 30;
    CHECK_THROWS_AS(solve_iasm_xp_b(pair, 1000), BudgetTooLarge);
}

TEST_CASE("solve_iasm_xp_k worked examples")
{
    Rng rng(109);
    for (int trial = 0; trial < 60; ++trial) {
        auto pair = random_pair(rng, 2 + rng.below_int(4));
        pair.budget_b = rng.below_int(2);

        // k=0 is feasible exactly when matching1 already fits the budget
        pair.budget_k = 0;
        auto res = solve_iasm_xp_k(pair);
        auto m1_ok = restrict_to_acceptable(pair.matching1, pair.profile2) == pair.matching1
            && static_cast<long long>(blocking_pairs_of_old_matching(pair.matching1, pair.profile2).size()) <= pair.budget_b;
        CHECK((res.status == SolveStatus::Optimal) == m1_ok);

        // with k large enough it reproduces the exact optimum
        auto exact = solve_iasm_exact(pair);
        pair.budget_k = exact.count;
        res = solve_iasm_xp_k(pair);
        REQUIRE(res.status == SolveStatus::Optimal);
        CHECK(res.count == exact.count);

        // k below the optimum is infeasible
        if (exact.count > 0) {
            pair.budget_k = exact.count - 1;
            CHECK(solve_iasm_xp_k(pair).status == SolveStatus::NoSolutionWithinK);
        }
    }
}

TEST_CASE("solve_ismt_agent_types: strict distinct preferences reduce to ISM")
{
    Rng rng(113);
    for (int trial = 0; trial < 25; ++trial) {
        auto pair = random_pair(rng, 3);
        auto ism = solve_ism(pair, Objective::Minimize);
        auto types = solve_ismt_agent_types(pair);
        CHECK(types.count == ism.count);
    }
}

TEST_CASE("solve_ismt_agent_types: full indifference keeps matching1")
{
    const int n = 3;
    PreferenceProfile p = PreferenceProfile::sm(n, n);
    for (int m = 0; m < n; ++m)
        p.left[m].tie_groups = {{0, 1, 2}};
    for (int w = 0; w < n; ++w)
        p.right[w].tie_groups = {{0, 1, 2}};
    p = validate_and_normalize(p);
    InstancePair pair;
    pair.profile1 = p;
    pair.profile2 = p;
    pair.matching1 = matching_of({{0, 0}, {1, 1}, {2, 2}});
    auto res = solve_ismt_agent_types(pair);
    CHECK(res.count == 0);
    CHECK(res.matching == pair.matching1);
}

TEST_CASE("solve_ismt_agent_types equals the weak-stability oracle on typed instances")
{
    Rng rng(127);
    for (int trial = 0; trial < 40; ++trial) {
        // 2 men types x 2 women types over n=4: agents 0,1 and 2,3 share a type
        const int n = 4;
        PreferenceProfile p = PreferenceProfile::sm(n, n);
        auto typed_list = [&](bool flip) {
            // a weak order over the two opposite types, each type a tie group
            std::vector<TieGroup> groups = flip ? std::vector<TieGroup>{{2, 3}, {0, 1}}
                                                : std::vector<TieGroup>{{0, 1}, {2, 3}};
            PreferenceList l;
            l.tie_groups = groups;
            return l;
        };
        bool flip_m = rng.below(2), flip_w = rng.below(2);
        for (int m = 0; m < n; ++m)
            p.left[m] = typed_list(m < 2 ? flip_m : ! flip_m);
        for (int w = 0; w < n; ++w)
            p.right[w] = typed_list(w < 2 ? flip_w : ! flip_w);
        p = validate_and_normalize(p);

        auto stable = enumerate_stable_matchings(p);
        REQUIRE(! stable.empty());
        InstancePair pair;
        pair.profile1 = p;
        pair.profile2 = p;
        pair.matching1 = stable[rng.below(stable.size())];

        long long oracle_best = std::numeric_limits<long long>::max();
        for (const auto & m : stable)
            oracle_best = std::min(oracle_best, symmetric_difference_count(pair.matching1, m));
        auto res = solve_ismt_agent_types(pair);
        CHECK(res.count == oracle_best);
        CHECK(blocking_pairs(res.matching, p).empty());
    }
}

TEST_CASE("solve_ismt_agent_types rejects too many types")
{
    Rng rng(131);
    auto pair = random_pair(rng, 4);
    CHECK_THROWS_AS(solve_ismt_agent_types(pair, 2), TooManyTypes);
}
