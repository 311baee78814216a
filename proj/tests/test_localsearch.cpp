#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "lktsp/candidates.hpp"
#include "lktsp/exact.hpp"
#include "lktsp/localsearch.hpp"
#include "support/fixtures.hpp"

using namespace lktsp;

namespace {

std::set<EdgeKey> edge_set(const std::vector<int>& order) {
    std::set<EdgeKey> keys;
    const int n = static_cast<int>(order.size());
    for (int k = 0; k < n; ++k) keys.insert(edge_key(order[k], order[(k + 1) % n]));
    return keys;
}

// directed one-neighbor lists reproducing the five-point alpha k=1 sets
CandidateSet five_point_alpha1_lists() {
    CandidateSet cand;
    cand.tag = Generator::ALPHA;
    cand.symmetric = false;
    cand.lists = {
        {{fixtures::B, 0.0}},  // A
        {{fixtures::A, 0.0}},  // B
        {{fixtures::B, 0.0}},  // C
        {{fixtures::A, 0.0}},  // D
        {{fixtures::A, 0.0}},  // E
    };
    return cand;
}

} // namespace

TEST_SUITE("localsearch") {

TEST_CASE("random tours are uniform permutations") {
    Rng rng(42);
    auto t = random_tour(5, rng);
    CHECK(is_permutation(t, 5));

    Rng a(7), b(7);
    CHECK(random_tour(8, a) == random_tour(8, b));

    std::map<std::vector<int>, int> freq;
    Rng r(11);
    for (int i = 0; i < 6000; ++i) ++freq[random_tour(3, r)];
    CHECK(freq.size() == 6);
    for (const auto& [perm, count] : freq) {
        CHECK(count > 850);
        CHECK(count < 1150);
    }
}

TEST_CASE("two-opt uncrosses the unit square") {
    auto inst = fixtures::unit_square();
    SearchState st(inst, {0, 2, 1, 3}, 1);
    CHECK(st.length == doctest::Approx(2.0 + 2.0 * std::sqrt(2.0)));
    two_opt_descent(inst, st, nullptr);
    CHECK(st.length == 4.0);
    CHECK(st.consistent());
    CHECK(crossing_count(inst, st.order) == 0);
}

TEST_CASE("two-opt leaves optimal tours alone") {
    auto inst = fixtures::unit_square();
    SearchState st(inst, {0, 1, 2, 3}, 1);
    two_opt_descent(inst, st, nullptr);
    CHECK(st.order == std::vector<int>{0, 1, 2, 3});
    CHECK(st.length == 4.0);
}

TEST_CASE("unrestricted two-opt descends and uncrosses the five-point tour") {
    auto inst = fixtures::five_point();
    SearchState st(inst, fixtures::start_order(), 3);
    std::vector<MoveRecord> log;
    two_opt_descent(inst, st, nullptr, nullptr, &log);
    CHECK(st.length <= fixtures::start_length());
    CHECK(crossing_count(inst, st.order) == 0);
    double gains = 0.0;
    for (const auto& rec : log) {
        CHECK(rec.gain > 0.0);
        gains += rec.gain;
    }
    CHECK(st.length ==
          doctest::Approx(fixtures::start_length() - gains).epsilon(1e-9));
}

TEST_CASE("one-neighbor alpha lists freeze the five-point start tour") {
    auto inst = fixtures::five_point();
    auto cand = five_point_alpha1_lists();
    SearchState st(inst, fixtures::start_order(), 5);
    const auto before = st.order;

    two_opt_descent(inst, st, &cand);
    CHECK(st.order == before);

    CHECK_FALSE(sequential_three_opt_step(inst, st, cand, 5));
    CHECK(st.order == before);

    descend(inst, st, &cand, 5);
    CHECK(st.order == before);
    CHECK(st.length == doctest::Approx(fixtures::start_length()).epsilon(1e-12));
}

TEST_CASE("full candidate lists lead the five-point start to the optimum") {
    auto inst = fixtures::five_point();
    auto cand = nearest_candidates(inst, 4);  // complete lists
    SearchState st(inst, fixtures::start_order(), 5);
    descend(inst, st, &cand, 5);
    CHECK(st.length == doctest::Approx(fixtures::optimal_length()).epsilon(1e-12));
    CHECK(st.consistent());

    // and the optimum is a fixpoint
    SearchState opt(inst, fixtures::optimal_order(), 5);
    CHECK_FALSE(sequential_three_opt_step(inst, opt, cand, 5));
    CHECK(opt.order == fixtures::optimal_order());
}

TEST_CASE("three-opt step improves strictly and stays consistent") {
    auto inst = gen_random_uniform(40, 5, 100.0);
    auto cand = nearest_candidates(inst, 8);
    Rng rng(9);
    SearchState st(inst, random_tour(40, rng), rng);
    double last = st.length;
    int steps = 0;
    while (sequential_three_opt_step(inst, st, cand, 5) && steps < 2000) {
        ++steps;
        CHECK(st.length < last);
        CHECK(st.consistent());
        last = st.length;
    }
    CHECK(steps >= 1);
    CHECK_FALSE(sequential_three_opt_step(inst, st, cand, 5));
}

TEST_CASE("descent logs only candidate edges outside the closing slot") {
    auto inst = gen_random_uniform(60, 12, 100.0);
    auto cand = nearest_candidates(inst, 6);
    Rng rng(4);
    SearchState st(inst, random_tour(60, rng), rng);
    std::vector<MoveRecord> log;
    descend(inst, st, &cand, 5, nullptr, &log);
    CHECK(!log.empty());
    for (const auto& rec : log) {
        REQUIRE(!rec.added.empty());
        for (std::size_t i = 0; i + 1 < rec.added.size(); ++i) {
            const int a = static_cast<int>(edge_lo(rec.added[i]));
            const int b = static_cast<int>(edge_hi(rec.added[i]));
            CHECK(cand.contains_undirected(a, b));
        }
    }
}

TEST_CASE("double bridge reconnection is frozen") {
    std::vector<int> order{0, 1, 2, 3, 4, 5, 6, 7};
    CHECK(double_bridge_apply(order, 2, 4, 6) ==
          std::vector<int>{0, 1, 6, 7, 4, 5, 2, 3});
    CHECK_THROWS(double_bridge_apply(order, 0, 4, 6));
    CHECK_THROWS(double_bridge_apply(order, 2, 2, 6));
    CHECK_THROWS(double_bridge_apply(order, 2, 4, 8));
}

TEST_CASE("double bridge changes exactly four edges") {
    auto inst = gen_random_uniform(10, 77, 100.0);
    Rng rng(13);
    SearchState st(inst, random_tour(10, rng), rng);
    int changed = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto before = edge_set(st.order);
        const auto before_order = st.order;
        double_bridge(st);
        CHECK(is_permutation(st.order, 10));
        if (st.order == before_order) continue;
        ++changed;
        const auto after = edge_set(st.order);
        std::vector<EdgeKey> gone, born;
        std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                            std::back_inserter(gone));
        std::set_difference(after.begin(), after.end(), before.begin(), before.end(),
                            std::back_inserter(born));
        CHECK(gone.size() == 4);
        CHECK(born.size() == 4);
    }
    CHECK(changed > 9900);
}

TEST_CASE("double bridge cannot fire below six cities") {
    auto five = fixtures::five_point();
    SearchState st5(five, fixtures::start_order(), 21);
    for (int i = 0; i < 1000; ++i) {
        double_bridge(st5);
        CHECK(st5.order == fixtures::start_order());
    }
    auto four = fixtures::unit_square();
    SearchState st4(four, {0, 1, 2, 3}, 22);
    for (int i = 0; i < 200; ++i) {
        double_bridge(st4);
        CHECK(st4.order == std::vector<int>{0, 1, 2, 3});
    }
}

TEST_CASE("constrained restart pins the best tour's edges") {
    auto inst = gen_random_uniform(10, 31, 100.0);
    auto opt = held_karp_dp(inst);
    const auto opt_edges = edge_set(opt.tour.order);

    Rng rng(8);
    SearchState st(inst, random_tour(10, rng), rng);
    two_opt_descent(inst, st, nullptr);

    constrained_restart_kick(st, opt.tour);
    CHECK(st.fixed_edges.size() == 10);
    const auto kept_at_start = [&] {
        std::vector<EdgeKey> inter;
        const auto now = edge_set(st.order);
        std::set_intersection(now.begin(), now.end(), opt_edges.begin(),
                              opt_edges.end(), std::back_inserter(inter));
        return inter;
    }();

    std::vector<MoveRecord> log;
    two_opt_descent(inst, st, nullptr, nullptr, &log);
    for (const auto& rec : log)
        for (EdgeKey k : rec.removed) CHECK(st.fixed_edges.count(k) == 0);

    const auto final_edges = edge_set(st.order);
    for (EdgeKey k : kept_at_start) CHECK(final_edges.count(k) == 1);
}

TEST_CASE("fixed edges can block the only improvement") {
    auto inst = fixtures::unit_square();
    SearchState st(inst, {0, 2, 1, 3}, 1);
    st.fixed_edges.insert(edge_key(0, 2));
    two_opt_descent(inst, st, nullptr);
    CHECK(st.order == std::vector<int>{0, 2, 1, 3});  // diagonal is pinned
    st.fixed_edges.clear();
    two_opt_descent(inst, st, nullptr);
    CHECK(st.length == 4.0);
}

TEST_CASE("crossing counter") {
    auto inst = fixtures::unit_square();
    CHECK(crossing_count(inst, {0, 1, 2, 3}) == 0);
    CHECK(crossing_count(inst, {0, 2, 1, 3}) == 1);
    auto rounded = make_instance("r", Metric::EUC_2D_ROUNDED, {0, 3, 10}, {0, 4, 10});
    CHECK_THROWS(crossing_count(rounded, {0, 1, 2}));
}

TEST_CASE("two-opt local optima are crossing-free") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto inst = gen_random_uniform(50, 400 + seed, 1000.0);
        Rng rng(seed);
        SearchState st(inst, random_tour(50, rng), rng);
        two_opt_descent(inst, st, nullptr);
        CHECK(crossing_count(inst, st.order) == 0);
    }
}

TEST_CASE("a zero budget stops the descent before it starts") {
    auto inst = gen_random_uniform(30, 2, 100.0);
    Rng rng(3);
    const auto start = random_tour(30, rng);
    SearchState st(inst, start, rng);
    TimeBudget spent(0.0);
    two_opt_descent(inst, st, nullptr, &spent);
    CHECK(st.order == start);
}

} // TEST_SUITE
