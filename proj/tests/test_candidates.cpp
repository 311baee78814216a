#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <vector>

#include "lktsp/candidates.hpp"
#include "lktsp/onetree.hpp"
#include "support/fixtures.hpp"

using namespace lktsp;

namespace {

std::vector<int> to_list(const CandidateSet& c, int i) {
    std::vector<int> out;
    for (const auto& cd : c.lists[i]) out.push_back(cd.to);
    return out;
}

std::set<EdgeKey> undirected_edges(const CandidateSet& c) {
    std::set<EdgeKey> keys;
    for (int i = 0; i < c.n(); ++i)
        for (const auto& cd : c.lists[i]) keys.insert(edge_key(i, cd.to));
    return keys;
}

} // namespace

TEST_SUITE("candidates") {

TEST_CASE("nearest neighbors on the unit square keep the sides") {
    auto inst = fixtures::unit_square();
    auto cand = nearest_candidates(inst, 2);
    CHECK(cand.tag == Generator::NEAREST);
    CHECK(to_list(cand, 0) == std::vector<int>{1, 3});
    CHECK(to_list(cand, 1) == std::vector<int>{0, 2});
    CHECK(to_list(cand, 2) == std::vector<int>{1, 3});
    CHECK(to_list(cand, 3) == std::vector<int>{0, 2});
    CHECK(unique_edge_count(cand) == 4);

    auto full = nearest_candidates(inst, 3);
    for (int i = 0; i < 4; ++i) CHECK(full.lists[i].size() == 3);
    CHECK(unique_edge_count(full) == 6);

    CHECK_THROWS(nearest_candidates(inst, 0));
    CHECK_THROWS(nearest_candidates(inst, 4));
}

TEST_CASE("nearest and alpha order the five-point lists differently at k=1") {
    auto inst = fixtures::five_point();

    auto near = nearest_candidates(inst, 1);
    CHECK(to_list(near, fixtures::A) == std::vector<int>{fixtures::D});  // 0.7 tie, low index
    CHECK(to_list(near, fixtures::B) == std::vector<int>{fixtures::C});
    CHECK(to_list(near, fixtures::C) == std::vector<int>{fixtures::B});
    CHECK(to_list(near, fixtures::D) == std::vector<int>{fixtures::A});
    CHECK(to_list(near, fixtures::E) == std::vector<int>{fixtures::A});

    auto alpha = alpha_candidates(inst, 1, false);
    CHECK(alpha.tag == Generator::ALPHA);
    CHECK(to_list(alpha, fixtures::A) == std::vector<int>{fixtures::B});
    CHECK(to_list(alpha, fixtures::B) == std::vector<int>{fixtures::A});
    CHECK(to_list(alpha, fixtures::C) == std::vector<int>{fixtures::B});
    CHECK(to_list(alpha, fixtures::D) == std::vector<int>{fixtures::A});
    CHECK(to_list(alpha, fixtures::E) == std::vector<int>{fixtures::A});
    for (int i = 0; i < 5; ++i) CHECK(alpha.lists[i][0].score == 0.0);

    const auto edges = undirected_edges(alpha);
    const std::set<EdgeKey> expect{
        edge_key(fixtures::A, fixtures::B), edge_key(fixtures::B, fixtures::C),
        edge_key(fixtures::A, fixtures::D), edge_key(fixtures::A, fixtures::E)};
    CHECK(edges == expect);
}

TEST_CASE("alpha candidates on the unit square keep the sides") {
    auto inst = fixtures::unit_square();
    auto cand = alpha_candidates(inst, 2, true);
    CHECK(to_list(cand, 0) == std::vector<int>{1, 3});
    CHECK(to_list(cand, 1) == std::vector<int>{0, 2});
    CHECK(to_list(cand, 2) == std::vector<int>{1, 3});
    CHECK(to_list(cand, 3) == std::vector<int>{0, 2});
}

TEST_CASE("alpha candidates are deterministic") {
    auto inst = gen_random_uniform(40, 19, 100.0);
    auto a = alpha_candidates(inst, 6, true);
    auto b = alpha_candidates(inst, 6, true);
    REQUIRE(a.n() == b.n());
    for (int i = 0; i < a.n(); ++i) {
        REQUIRE(a.lists[i].size() == b.lists[i].size());
        for (std::size_t j = 0; j < a.lists[i].size(); ++j) {
            CHECK(a.lists[i][j].to == b.lists[i][j].to);
            CHECK(a.lists[i][j].score == b.lists[i][j].score);
        }
    }
    CHECK(write_candidate_file(a, true) == write_candidate_file(b, true));
}

TEST_CASE("tour unions count frequencies and restore symmetry after capping") {
    auto inst = fixtures::unit_square();
    Tour straight{{0, 1, 2, 3}, 4.0};
    Tour crossed{{0, 2, 1, 3}, 2.0 + 2.0 * std::sqrt(2.0)};

    auto doubled = union_from_tours(inst, {straight, straight});
    CHECK(doubled.symmetric);
    for (int i = 0; i < 4; ++i) {
        CHECK(doubled.lists[i].size() == 2);
        for (const auto& c : doubled.lists[i]) CHECK(c.score == 2.0);
    }
    CHECK(unique_edge_count(doubled) == 4);

    auto both = union_from_tours(inst, {straight, crossed});
    CHECK(unique_edge_count(both) == 6);
    // repeated edges first: (1,2) and (0,3) appear in both tours
    CHECK(to_list(both, 0) == std::vector<int>{3, 1, 2});
    CHECK(to_list(both, 1) == std::vector<int>{2, 0, 3});

    auto capped = union_from_tours(inst, {straight, crossed}, 1);
    CHECK(capped.symmetric);
    CHECK(to_list(capped, 0) == std::vector<int>{3});
    CHECK(to_list(capped, 1) == std::vector<int>{2});
    CHECK(to_list(capped, 2) == std::vector<int>{1});
    CHECK(to_list(capped, 3) == std::vector<int>{0});
    CHECK(unique_edge_count(capped) == 2);

    CHECK_THROWS(union_from_tours(inst, {}));
    CHECK_THROWS(union_from_tours(inst, {straight}, 0));
    Tour wrong{{0, 1, 2}, 0.0};
    CHECK_THROWS(union_from_tours(inst, {straight, wrong}));
}

TEST_CASE("a symmetric cap can overflow where tours disagree") {
    // two edge-disjoint circuits over six cities: every city ends with 4 neighbors
    auto inst = gen_random_uniform(6, 5, 10.0);
    Tour t1{{0, 1, 2, 3, 4, 5}, 0.0};
    Tour t2{{0, 2, 4, 1, 5, 3}, 0.0};
    auto all = union_from_tours(inst, {t1, t2});
    for (int i = 0; i < 6; ++i) CHECK(all.lists[i].size() == 4);
    CHECK(unique_edge_count(all) == 12);
}

TEST_CASE("two-opt unions cover the five-point optimum") {
    auto inst = fixtures::five_point();
    Tour opt{fixtures::optimal_order(), fixtures::optimal_length()};

    auto wide = two_opt_union(inst, 100, 3);
    CHECK(wide.tag == Generator::TWO_OPT_UNION);
    CHECK(missing_optimal_edges(wide, opt).count == 0);

    auto narrow = two_opt_union(inst, 1, 3);
    CHECK(unique_edge_count(narrow) == 5);  // edges of one locally optimal tour
    for (int i = 0; i < 5; ++i) CHECK(narrow.lists[i].size() == 2);

    auto again = two_opt_union(inst, 1, 3);
    CHECK(write_candidate_file(narrow, false) == write_candidate_file(again, false));

    CHECK_THROWS(two_opt_union(inst, 0, 3));
}

TEST_CASE("missing optimal edges") {
    auto inst = fixtures::five_point();
    Tour opt{fixtures::optimal_order(), fixtures::optimal_length()};

    auto alpha = alpha_candidates(inst, 1, false);
    auto miss = missing_optimal_edges(alpha, opt);
    CHECK(miss.count == 2);
    const std::set<std::pair<int, int>> expect{
        {fixtures::C, fixtures::D}, {fixtures::B, fixtures::E}};
    CHECK(std::set<std::pair<int, int>>(miss.edges.begin(), miss.edges.end()) ==
          expect);

    auto self = union_from_tours(inst, {opt});
    CHECK(missing_optimal_edges(self, opt).count == 0);

    CandidateSet empty;
    empty.lists.assign(5, {});
    CHECK(missing_optimal_edges(empty, opt).count == 5);

    CandidateSet tiny;
    tiny.lists.assign(3, {});
    CHECK_THROWS(missing_optimal_edges(tiny, opt));
}

TEST_CASE("candidate files round-trip") {
    auto inst = fixtures::five_point();
    auto alpha = alpha_candidates(inst, 2, false);
    const auto text = write_candidate_file(alpha, true);
    CHECK(std::count(text.begin(), text.end(), '\n') == 7);

    std::istringstream in(text);
    auto parsed = parse_candidate_file(in);
    CHECK(parsed.tag == Generator::FILE);
    REQUIRE(parsed.n() == 5);
    for (int i = 0; i < 5; ++i) CHECK(to_list(parsed, i) == to_list(alpha, i));
}

TEST_CASE("candidate file parse errors carry line numbers") {
    auto expect_error = [](const std::string& text, int line) {
        std::istringstream in(text);
        try {
            parse_candidate_file(in);
            FAIL("expected a parse error for: " << text);
        } catch (const ParseError& e) {
            CHECK(e.line == line);
        }
    };
    expect_error("3\n1 0 2 2 0\n", 2);                           // count mismatch
    expect_error("3\n1 0 1 2 0 3 0\n", 2);                       // trailing pair
    expect_error("3\n1 0 1 2 0\n2 0 1 3 0\n3 0 1 1 0\n", 5);     // missing terminator
    expect_error("3\n4 0 1 2 0\n", 2);                           // id out of range
    expect_error("3\n1 0 1 4 0\n", 2);                           // neighbor out of range
    expect_error("3\n1 0 1 1 0\n", 2);                           // self loop
    expect_error("x\n", 1);
}

TEST_CASE("mean alpha rank of the five-point optimum") {
    auto inst = fixtures::five_point();
    Pi zero(5);
    auto tree = minimum_one_tree(inst, zero, default_special(inst, zero));
    auto table = alpha_values(inst, tree);
    Tour opt{fixtures::optimal_order(), fixtures::optimal_length()};
    CHECK(mean_optimal_alpha_rank(table, opt) == doctest::Approx(2.1).epsilon(1e-12));
}

} // TEST_SUITE
