#include <doctest.h>

#include <cmath>
#include <map>

#include "baxlab/permutation.hpp"
#include "baxlab/stats.hpp"
#include "baxlab/walk.hpp"

using namespace baxlab;

TEST_CASE("tandem validation") {
    std::vector<std::pair<int64_t, int64_t>> running{{0, 2}, {0, 3}, {0, 3}, {1, 2}, {2, 1},
                                                     {0, 3}, {1, 2}, {2, 1}, {3, 0}, {2, 0}};
    CHECK(validate_tandem(running).size() == 10);
    CHECK(validate_tandem({{0, 0}}).size() == 1);

    auto bad1 = check_tandem(std::vector<std::pair<int64_t, int64_t>>{{1, 0}, {0, 1}});
    REQUIRE(bad1.has_value());
    CHECK(bad1->code == errc::bad_endpoints);
    CHECK(bad1->index == 1);

    auto bad2 = check_tandem(std::vector<std::pair<int64_t, int64_t>>{{0, 1}, {2, 0}});
    REQUIRE(bad2.has_value());
    CHECK(bad2->code == errc::bad_increment);

    auto bad3 = check_tandem(std::vector<std::pair<int64_t, int64_t>>{{0, 1}, {1, 0}, {0, -1}});
    REQUIRE(bad3.has_value());
    CHECK(bad3->code == errc::bad_endpoints);  // Y_n != 0 reported at the endpoint
}

TEST_CASE("step law sampling and moments") {
    Rng rng(99);
    const int N = 1000000;
    int64_t diag = 0;
    double sx = 0, sy = 0;
    for (int q = 0; q < N; ++q) {
        Step s = sample_step(rng);
        CHECK(step_in_a(s));
        if (s.dx == 1) ++diag;
        sx += s.dx;
        sy += s.dy;
    }
    CHECK(std::fabs(double(diag) / N - 0.5) < 0.002);
    // mean of nu is (0,0): sem of each coordinate is sqrt(2/N)
    CHECK(std::fabs(sx / N) < 3 * std::sqrt(2.0 / N));
    CHECK(std::fabs(sy / N) < 3 * std::sqrt(2.0 / N));

    auto m = nu_moments();
    CHECK(std::fabs(m.mean[0]) < 1e-12);
    CHECK(std::fabs(m.mean[1]) < 1e-12);
    CHECK(std::fabs(m.cov[0][0] - 2.0) < 1e-12);
    CHECK(std::fabs(m.cov[1][1] - 2.0) < 1e-12);
    CHECK(std::fabs(m.cov[0][1] + 1.0) < 1e-12);
    CHECK(m.tail_bound < 1e-13);
    // correlation -1/2
    CHECK(std::fabs(m.cov[0][1] / std::sqrt(m.cov[0][0] * m.cov[1][1]) + 0.5) < 1e-12);

    // nu masses sum to one over a big finite box
    double mass = nu_mass(Step{1, -1});
    for (int i = 0; i <= 60; ++i)
        for (int j = 0; j <= 60; ++j) mass += nu_mass(Step{-i, j});
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uniform rejection sampler at tiny sizes") {
    Rng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        auto r = sample_uniform_tandem(1, 0.0, rng);
        CHECK(r.realized_size == 1);
        CHECK(r.walk.values == std::vector<std::pair<int64_t, int64_t>>{{0, 0}});
    }

    // uniformity over the six walks of W_3
    auto support = enumerate_tandem(3);
    std::map<std::vector<std::pair<int64_t, int64_t>>, int64_t> counts;
    const int N = 30000;
    for (int q = 0; q < N; ++q) {
        auto r = sample_uniform_tandem(3, 0.0, rng);
        CHECK(!check_tandem(r.walk.values).has_value());
        ++counts[r.walk.values];
    }
    REQUIRE(counts.size() == support.size());
    std::vector<double> obs, expected;
    for (auto& [walk, c] : counts) {
        obs.push_back(double(c));
        expected.push_back(double(N) / double(support.size()));
    }
    CHECK(stats::chi2_test(obs, expected).pvalue > 0.01);
}

TEST_CASE("enumerate_tandem matches Baxter counts") {
    const int64_t expected[] = {1, 2, 6, 22, 92, 422, 2074};
    for (int n = 1; n <= 7; ++n) {
        auto walks = enumerate_tandem(n);
        CHECK(int64_t(walks.size()) == expected[n - 1]);
        for (const auto& w : walks) CHECK(!check_tandem(w.values).has_value());
    }
    CHECK(enumerate_tandem(1).front().values == std::vector<std::pair<int64_t, int64_t>>{{0, 0}});
    CHECK_THROWS_AS(enumerate_tandem(8), error);
}

TEST_CASE("reverse_swap is an involution") {
    CHECK(reverse_swap(validate_tandem({{0, 0}})).values ==
          std::vector<std::pair<int64_t, int64_t>>{{0, 0}});
    for (int n = 1; n <= 5; ++n)
        for (const auto& w : enumerate_tandem(n)) CHECK(reverse_swap(reverse_swap(w)).values == w.values);
}

TEST_CASE("window sampler") {
    Rng rng(3);
    auto w0 = sample_window(0, rng);
    CHECK(w0.points() == 1);
    CHECK(w0.values(0) == std::vector<std::pair<int64_t, int64_t>>{{0, 0}});

    // product-form probability of a fixed two-step window, MC vs exact
    LatticeWalk target;
    target.lo = -1;
    target.steps = {Step{1, -1}, Step{0, 1}};
    const double exact = nu_mass(target.steps[0]) * nu_mass(target.steps[1]);
    const int N = 400000;
    int hits = 0;
    for (int q = 0; q < N; ++q) {
        auto w = sample_window(1, rng);
        if (w.steps == target.steps) ++hits;
    }
    double sem = std::sqrt(exact * (1 - exact) / N);
    CHECK(std::fabs(double(hits) / N - exact) < 3 * sem);
}

TEST_CASE("window increment law chi-square over the most probable steps") {
    Rng rng(17);
    // the 20 most probable steps of nu: (1,-1) mass 1/2, then (-i,j) with
    // small i+j
    std::vector<std::pair<Step, double>> bins;
    bins.push_back({Step{1, -1}, 0.5});
    for (int s = 0; s <= 4; ++s)
        for (int i = 0; i <= s; ++i) bins.push_back({Step{-i, s - i}, std::ldexp(1.0, -s - 3)});
    double tail = 1.0;
    for (auto& [st, p] : bins) tail -= p;

    const int N = 1000000;
    std::vector<double> obs(bins.size() + 1, 0.0), expected;
    for (int q = 0; q < N; ++q) {
        Step s = sample_step(rng);
        bool placed = false;
        for (size_t b = 0; b < bins.size(); ++b)
            if (bins[b].first == s) {
                obs[b] += 1;
                placed = true;
                break;
            }
        if (!placed) obs.back() += 1;
    }
    for (auto& [st, p] : bins) expected.push_back(p * N);
    expected.push_back(tail * N);
    auto r = stats::chi2_test(obs, expected);
    CHECK(r.pvalue > 0.01);
}

TEST_CASE("diffusive rescaling covariance") {
    Rng rng(23);
    const int64_t n = 10000;
    const int samples = 100000;
    double sxx = 0, syy = 0, sxy = 0;
    for (int s = 0; s < samples; ++s) {
        int64_t x = 0, y = 0;
        for (int64_t t = 0; t < n; ++t) {
            Step st = sample_step(rng);
            x += st.dx;
            y += st.dy;
        }
        double xs = double(x) / std::sqrt(2.0 * double(n));
        double ys = double(y) / std::sqrt(2.0 * double(n));
        sxx += xs * xs;
        syy += ys * ys;
        sxy += xs * ys;
    }
    // Var of x^2-type averages is about 2/samples for unit-variance marginals
    double tol = 3.0 * std::sqrt(2.0 / samples);
    CHECK(std::fabs(sxx / samples - 1.0) < tol);
    CHECK(std::fabs(syy / samples - 1.0) < tol);
    CHECK(std::fabs(sxy / samples + 0.5) < tol);
}

TEST_CASE("determinism and replay of the parallel sampler") {
    auto a = sample_uniform_tandem_parallel(4, 0.0, 12345, 1);
    auto b = sample_uniform_tandem_parallel(4, 0.0, 12345, 2);
    CHECK(a.walk.values == b.walk.values);
    CHECK(a.stream == b.stream);
    CHECK(a.trial_in_stream == b.trial_in_stream);
    auto c = replay_uniform_tandem(4, 0.0, 12345, a.stream, a.trial_in_stream);
    CHECK(c.walk.values == a.walk.values);
    CHECK_THROWS_AS(replay_uniform_tandem(4, 0.0, 12345, a.stream, a.trial_in_stream + 1), error);
}

TEST_CASE("biased tandem generator produces valid walks") {
    Rng rng(8);
    for (int rep = 0; rep < 50; ++rep) {
        auto w = sample_tandem_biased(1 + int64_t(rng.below(60)), rng);
        CHECK(!check_tandem(w.values).has_value());
    }
}
