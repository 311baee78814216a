#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "lktsp/rng.hpp"

using lktsp::Rng;

TEST_SUITE("rng") {

TEST_CASE("same seed reproduces the stream") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    Rng c(42), d(42);
    for (int i = 0; i < 1000; ++i) {
        CHECK(c.next_unit() == d.next_unit());
        CHECK(c.next_below(97) == d.next_below(97));
    }
}

TEST_CASE("different seeds diverge") {
    Rng a(1), b(2);
    int diff = 0;
    for (int i = 0; i < 64; ++i) {
        if (a.next_u64() != b.next_u64()) ++diff;
    }
    CHECK(diff > 0);
}

TEST_CASE("next_below stays in range and covers all residues") {
    Rng r(7);
    std::vector<int> seen(10, 0);
    for (int i = 0; i < 10000; ++i) {
        auto v = r.next_below(10);
        REQUIRE(v < 10);
        ++seen[v];
    }
    for (int c : seen) CHECK(c > 0);
}

TEST_CASE("next_unit lies in [0,1)") {
    Rng r(3);
    for (int i = 0; i < 10000; ++i) {
        double u = r.next_unit();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("next_below uniformity: chi-square over 16 bins") {
    // 16 bins, 16000 draws, expected 1000 per bin; chi-square df=15,
    // 99.9% quantile is 37.70
    Rng r(11);
    std::vector<int> bins(16, 0);
    for (int i = 0; i < 16000; ++i) ++bins[r.next_below(16)];
    double chi = 0.0;
    for (int c : bins) {
        double d = c - 1000.0;
        chi += d * d / 1000.0;
    }
    CHECK(chi < 37.70);
}

TEST_CASE("gaussian moments are sane") {
    Rng r(5);
    const int N = 100000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < N; ++i) {
        double g = r.next_gaussian();
        sum += g;
        sq += g * g;
    }
    double mean = sum / N;
    double var = sq / N - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("shuffle produces a permutation and is seed-deterministic") {
    Rng a(9), b(9);
    std::vector<int> va(50), vb(50);
    std::iota(va.begin(), va.end(), 0);
    std::iota(vb.begin(), vb.end(), 0);
    a.shuffle(va);
    b.shuffle(vb);
    CHECK(va == vb);
    std::vector<int> sorted = va;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 50; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("shuffle at n=3 hits every permutation roughly uniformly") {
    // 6000 draws over 6 permutations: each should land near 1000 +- 150
    Rng r(123);
    std::map<std::vector<int>, int> freq;
    for (int i = 0; i < 6000; ++i) {
        std::vector<int> v{0, 1, 2};
        r.shuffle(v);
        ++freq[v];
    }
    CHECK(freq.size() == 6);
    for (const auto& [perm, count] : freq) {
        CHECK(count > 850);
        CHECK(count < 1150);
    }
}

} // TEST_SUITE
