#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "baxlab/coalescent.hpp"
#include "baxlab/permuton.hpp"
#include "baxlab/stats.hpp"

using namespace baxlab;

namespace {

Permutation random_perm(int n, Rng& rng) {
    std::vector<int> vals(size_t(n), 0);
    for (int i = 0; i < n; ++i) vals[size_t(i)] = i + 1;
    for (int i = n - 1; i > 0; --i) std::swap(vals[size_t(i)], vals[rng.below(uint64_t(i) + 1)]);
    return Permutation(vals);
}

}  // namespace

TEST_CASE("mu_sigma basics") {
    auto g1 = mu_sigma(Permutation({1}));
    CHECK(g1.k == 1);
    CHECK(g1.at(1, 1) == doctest::Approx(1.0));

    auto gid = mu_sigma(Permutation::identity(8));
    for (int i = 1; i <= 8; ++i) CHECK(gid.at(i, i) == doctest::Approx(1.0 / 8));
    validate_permuton(gid);

    Rng rng(3);
    for (int rep = 0; rep < 100; ++rep) validate_permuton(mu_sigma(random_perm(1 + int(rng.below(40)), rng)));
}

TEST_CASE("rectangle distance") {
    auto gid = mu_sigma(Permutation::identity(2));
    auto g21 = mu_sigma(Permutation({2, 1}));
    CHECK(d_square(gid, gid) == doctest::Approx(0.0));
    CHECK(d_square(gid, g21) == doctest::Approx(0.5));

    Rng rng(5);
    for (int rep = 0; rep < 40; ++rep) {
        int n = 2 + int(rng.below(8));
        auto a = mu_sigma(random_perm(n, rng));
        auto b = mu_sigma(random_perm(n, rng));
        auto c = mu_sigma(random_perm(n, rng));
        double ab = d_square(a, b), ba = d_square(b, a);
        CHECK(ab == doctest::Approx(ba));
        CHECK(d_square(a, c) <= ab + d_square(b, c) + 1e-12);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
    }
    CHECK_THROWS_AS(d_square(mu_sigma(Permutation::identity(2)), mu_sigma(Permutation::identity(3))), error);
}

TEST_CASE("regrid preserves mass and marginals") {
    Rng rng(7);
    for (int rep = 0; rep < 30; ++rep) {
        int n = 3 + int(rng.below(30));
        auto sigma = random_perm(n, rng);
        auto g = mu_sigma(sigma);
        int k2 = 1 + int(rng.below(20));
        auto h = regrid(g, k2);
        validate_permuton(h);
        // direct coarsening agrees with the grid route
        auto h2 = coarsen_mu_sigma(sigma, k2);
        REQUIRE(h2.mass.size() == h.mass.size());
        for (size_t q = 0; q < h.mass.size(); ++q) CHECK(h.mass[q] == doctest::Approx(h2.mass[q]));
    }
}

TEST_CASE("grid rotation matches diagram rotation exactly") {
    Rng rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        auto sigma = random_perm(1 + int(rng.below(30)), rng);
        auto rotated_grid = rotate_grid_cw(mu_sigma(sigma));
        auto grid_of_rotated = mu_sigma(rotate_star(sigma));
        CHECK(d_square(rotated_grid, grid_of_rotated) == doctest::Approx(0.0));
    }
}

TEST_CASE("Baxter class is rotation invariant as a multiset") {
    for (int n = 1; n <= 6; ++n) {
        auto all = enumerate_baxter(n);
        std::set<std::vector<int>> orig, rotated;
        for (const auto& p : all) {
            orig.insert(p.values());
            rotated.insert(rotate_star(p).values());
        }
        CHECK(orig == rotated);
    }
}

TEST_CASE("perm_k on degenerate and uniform grids") {
    Rng rng(13);
    // The grid of the identity puts mass on diagonal cells; points landing in
    // distinct cells always induce the identity. (Two points in one cell may
    // invert, since the cell measure is area measure; high resolution and a
    // frozen seed keep this run collision-free.)
    auto gid = mu_sigma(Permutation::identity(2048));
    for (int rep = 0; rep < 10; ++rep) {
        int k = 1 + int(rng.below(8));
        CHECK(perm_k(gid, k, rng) == Permutation::identity(k));
    }
    CHECK(perm_k(gid, 1, rng) == Permutation({1}));

    // uniform grid induces uniform permutations of size 3
    GridPermuton uni;
    uni.k = 4;
    uni.mass.assign(16, 1.0 / 16);
    std::map<std::vector<int>, int64_t> counts;
    const int N = 60000;
    for (int q = 0; q < N; ++q) ++counts[perm_k(uni, 3, rng).values()];
    REQUIRE(counts.size() == 6);
    std::vector<double> obs, expected;
    for (auto& [v, c] : counts) {
        obs.push_back(double(c));
        expected.push_back(N / 6.0);
    }
    CHECK(stats::chi2_test(obs, expected).pvalue > 0.01);
}

TEST_CASE("perm_k concentrates around its permuton") {
    Rng rng(17);
    // moderate-size host permutation from the coalescent pipeline
    auto sigma = cp_linear(sample_tandem_biased(500, rng));
    const int k = 1024;
    const int common = 250;
    auto host = coarsen_mu_sigma(sigma, common);
    const double bound = 16.0 * std::pow(double(k), -0.25);
    for (int trial = 0; trial < 5; ++trial) {
        auto tau = perm_k(mu_sigma(sigma), k, rng);
        double d = d_square(coarsen_mu_sigma(tau, common), host);
        CHECK(d < bound);
        CHECK(d < 0.12);  // regression threshold at this size
    }
}

TEST_CASE("baxter permuton estimate at small size") {
    Rng rng(19);
    const int samples = 24;
    auto est = baxter_permuton_estimate(100, samples, rng, 16, 0.1);
    CHECK(int(est.samples.size()) == samples);
    for (const auto& g : est.samples) validate_permuton(g);
    validate_permuton(est.mean);
    for (int64_t m : est.realized_sizes) {
        CHECK(m >= 100);
        CHECK(m <= 110);
    }

    // distributional rotation invariance: cellwise mean difference within
    // 3 sigma of the rotated mean
    const int k = est.mean.k;
    std::vector<double> diffs(size_t(k) * size_t(k), 0.0), sq(size_t(k) * size_t(k), 0.0);
    for (const auto& g : est.samples) {
        auto rot = rotate_grid_cw(g);
        for (size_t q = 0; q < g.mass.size(); ++q) {
            double d = g.mass[q] - rot.mass[q];
            diffs[q] += d;
            sq[q] += d * d;
        }
    }
    int violations = 0;
    for (size_t q = 0; q < diffs.size(); ++q) {
        double mean = diffs[q] / samples;
        double var = (sq[q] - diffs[q] * diffs[q] / samples) / (samples - 1);
        double sem = std::sqrt(std::max(var, 1e-18) / samples);
        if (std::fabs(mean) > 3 * sem + 1e-12) ++violations;
    }
    // 3 sigma per cell: a few violations out of 256 cells are expected noise
    CHECK(violations <= int(diffs.size() / 20));
}
