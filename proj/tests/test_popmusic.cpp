#include <doctest.h>

#include <set>
#include <vector>

#include "lktsp/localsearch.hpp"
#include "lktsp/onetree.hpp"
#include "lktsp/popmusic.hpp"
#include "support/fixtures.hpp"

using namespace lktsp;

namespace {

std::set<EdgeKey> tour_edges(const std::vector<int>& order) {
    std::set<EdgeKey> keys;
    const int n = static_cast<int>(order.size());
    for (int k = 0; k < n; ++k) keys.insert(edge_key(order[k], order[(k + 1) % n]));
    return keys;
}

} // namespace

TEST_SUITE("popmusic") {

TEST_CASE("sample sizes") {
    PopmusicParams p;
    CHECK(popmusic_sample_size(4, p) == 3);
    CHECK(popmusic_sample_size(5, p) == 3);
    CHECK(popmusic_sample_size(30, p) == 3);
    CHECK(popmusic_sample_size(31, p) == 4);
    CHECK(popmusic_sample_size(200, p) == 20);
    p.sample_fraction = 1.0;
    CHECK(popmusic_sample_size(7, p) == 7);
    p.sample_fraction = 0.0;
    CHECK_THROWS(popmusic_sample_size(10, p));
    p.sample_fraction = 1.5;
    CHECK_THROWS(popmusic_sample_size(10, p));
}

TEST_CASE("the unit square always comes out at 4.0") {
    auto inst = fixtures::unit_square();
    PopmusicParams p;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto t = popmusic_tour(inst, seed, p);
        CHECK(is_permutation(t.order, 4));
        CHECK(t.length == 4.0);
    }
    p.r = 3;
    CHECK(popmusic_tour(inst, 1, p).length == 4.0);
}

TEST_CASE("five-point runs produce valid tours") {
    auto inst = fixtures::five_point();
    PopmusicParams p;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto t = popmusic_tour(inst, seed, p);
        CHECK(is_permutation(t.order, 5));
        CHECK(t.length == doctest::Approx(tour_length(inst, t.order)).epsilon(1e-12));
    }
}

TEST_CASE("same seed, same tour") {
    auto inst = gen_random_uniform(80, 7, 500.0);
    PopmusicParams p;
    auto a = popmusic_tour(inst, 99, p);
    auto b = popmusic_tour(inst, 99, p);
    CHECK(a.order == b.order);
    CHECK(a.length == b.length);
}

TEST_CASE("tour quality sits between the tree bound and full two-opt") {
    auto inst = gen_random_uniform(200, 123, 1000.0);
    const double bound = subgradient_ascent(inst).best_bound;
    PopmusicParams p;

    double pop_total = 0.0, two_opt_total = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto t = popmusic_tour(inst, seed, p);
        CHECK(t.length >= bound);
        pop_total += t.length;

        Rng rng(seed);
        SearchState st(inst, random_tour(200, rng), rng);
        two_opt_descent(inst, st, nullptr);
        CHECK(st.length >= bound);
        two_opt_total += st.length;
    }
    CHECK(pop_total / 10.0 >= two_opt_total / 10.0);
}

TEST_CASE("a single run's candidates are exactly its tour edges") {
    auto inst = gen_random_uniform(40, 11, 100.0);
    PopmusicParams p;
    p.runs_for_candidates = 1;
    auto cand = popmusic_candidates(inst, 5, p);
    CHECK(cand.tag == Generator::POPMUSIC);
    CHECK(cand.symmetric);

    auto tour = popmusic_tour(inst, 5, p);
    std::set<EdgeKey> cand_edges;
    for (int i = 0; i < cand.n(); ++i)
        for (const auto& c : cand.lists[i]) cand_edges.insert(edge_key(i, c.to));
    CHECK(cand_edges == tour_edges(tour.order));

    p.runs_for_candidates = 0;
    CHECK_THROWS(popmusic_candidates(inst, 5, p));
}

TEST_CASE("ten runs cover the five-point optimum") {
    auto inst = fixtures::five_point();
    PopmusicParams p;
    auto cand = popmusic_candidates(inst, 1, p);
    Tour opt{fixtures::optimal_order(), fixtures::optimal_length()};
    CHECK(missing_optimal_edges(cand, opt).count == 0);
}

TEST_CASE("different seeds usually give different candidate sets") {
    auto inst = gen_random_uniform(50, 77, 1000.0);
    PopmusicParams p;
    p.runs_for_candidates = 2;
    int differing = 0;
    for (std::uint64_t k = 0; k < 50; ++k) {
        auto a = popmusic_candidates(inst, 1000 + 2 * k, p);
        auto b = popmusic_candidates(inst, 2000 + 2 * k, p);
        if (write_candidate_file(a, false) != write_candidate_file(b, false))
            ++differing;
    }
    CHECK(differing >= 48);  // >= 95% of pairs
}

} // TEST_SUITE
