#include <doctest.h>

#include <cmath>

#include "baxlab/coalescent.hpp"
#include "baxlab/stats.hpp"

using namespace baxlab;

namespace {

TandemWalk running_walk() {
    return validate_tandem({{0, 2}, {0, 3}, {0, 3}, {1, 2}, {2, 1}, {0, 3}, {1, 2}, {2, 1}, {3, 0}, {2, 0}});
}

// direct check of the coalescent-process axioms on a pair of trajectories
void check_pair(const CoalescentProcess& z, int64_t t, int64_t u) {
    int sign = 0;  // -1, 0, +1 for Z^(t) vs Z^(u)
    bool merged = false;
    for (int64_t k = u; k <= z.hi(); ++k) {
        int64_t a = z.at(t, k), b = z.at(u, k);
        if (merged) {
            CHECK(a == b);  // coalescence is absorbing
            continue;
        }
        if (a == b) {
            merged = true;
            CHECK(b >= 0);  // coalescent points sit at non-negative height
            continue;
        }
        int s = a < b ? -1 : 1;
        if (sign == 0) sign = s;
        CHECK(s == sign);  // non-crossing
    }
}

}  // namespace

TEST_CASE("wc on the running example") {
    auto z = wc(running_walk());
    CHECK(cp(z) == Permutation({8, 6, 5, 7, 9, 1, 2, 4, 10, 3}));
    CHECK(is_baxter(cp(z)));
}

TEST_CASE("wc rejects steps outside A") {
    CHECK_THROWS_AS(wc(std::vector<Step>{Step{2, 0}}, 1), error);
}

TEST_CASE("single-point walk") {
    auto z = wc(std::vector<Step>{}, 1);
    CHECK(z.n() == 1);
    CHECK(z.at(1, 1) == 0);
    CHECK(cp(z) == Permutation({1}));
    auto f = fortree_naive(z);
    CHECK(f.roots.size() == 1);
    CHECK(f.root_index == std::vector<int64_t>{0});
}

TEST_CASE("coalescent axioms, exhaustive small plus random large") {
    for (int n = 1; n <= 5; ++n) {
        for (const auto& w : enumerate_tandem(n)) {
            auto z = wc(w);
            for (int64_t t = 1; t <= n; ++t)
                for (int64_t u = t + 1; u <= n; ++u) check_pair(z, t, u);
        }
    }
    Rng rng(41);
    for (int rep = 0; rep < 100; ++rep) {
        auto w = sample_nu_walk(1000, rng);
        auto z = wc(w);
        for (int pairs = 0; pairs < 2000; ++pairs) {
            int64_t t = 1 + int64_t(rng.below(1000));
            int64_t u = 1 + int64_t(rng.below(1000));
            if (t == u) continue;
            check_pair(z, std::min(t, u), std::max(t, u));
        }
    }
}

TEST_CASE("leq_z is a total order") {
    for (int n = 1; n <= 5; ++n) {
        for (const auto& w : enumerate_tandem(n)) {
            auto z = wc(w);
            for (int64_t i = 1; i <= n; ++i) {
                CHECK(leq_z(z, i, i));
                for (int64_t j = 1; j <= n; ++j) {
                    if (i != j) CHECK(leq_z(z, i, j) != leq_z(z, j, i));  // antisymmetry
                    for (int64_t k = 1; k <= n; ++k)
                        if (leq_z(z, i, j) && leq_z(z, j, k)) CHECK(leq_z(z, i, k));
                }
            }
        }
    }
    auto z = wc(running_walk());
    CHECK_THROWS_AS(leq_z(z, 0, 4), error);
}

TEST_CASE("cp: the two routes agree and corruption is detected") {
    for (int n = 1; n <= 5; ++n) {
        for (const auto& w : enumerate_tandem(n)) {
            auto z = wc(w);
            CHECK(cp(z) == cp_from_forest(fortree_naive(z)));
            CHECK(cp(z) == cp_linear(w));
        }
    }
    // inconsistent comparisons must be flagged
    CoalescentProcess bad(1, 3);
    bad.at_mut(1, 2) = -1;
    bad.at_mut(1, 3) = 1;
    bad.at_mut(2, 3) = -1;
    CHECK_THROWS_AS(cp(bad), error);
}

TEST_CASE("local time counts zero visits") {
    auto w = running_walk();
    auto z = wc(w);
    for (int64_t i = 1; i <= z.n(); ++i) {
        CHECK(local_time(z, i, i) == 1);
        for (int64_t j = i; j < z.n(); ++j) CHECK(local_time(z, i, j + 1) >= local_time(z, i, j));
    }
    // depth in the forest is the horizon local time minus one
    Rng rng(43);
    for (int rep = 0; rep < 20; ++rep) {
        auto wr = sample_tandem_biased(300, rng);
        auto zr = wc(wr);
        auto depth = fortree_linear(wr).depth();
        for (int64_t i = 1; i <= zr.n(); ++i)
            CHECK(local_time(zr, i, zr.n()) - 1 == depth[size_t(i) - 1]);
    }
}

TEST_CASE("fortree: naive and linear agree") {
    for (int n = 1; n <= 6; ++n)
        for (const auto& w : enumerate_tandem(n)) CHECK(fortree_naive(wc(w)) == fortree_linear(w));
    Rng rng(47);
    for (int rep = 0; rep < 100; ++rep) {
        auto w = sample_nu_walk(1000, rng);
        CHECK(fortree_naive(wc(w)) == fortree_linear(w.steps, w.lo));
    }
    // forest exploration equals the <=_Z order
    for (const auto& w : enumerate_tandem(5)) {
        auto z = wc(w);
        auto f = fortree_naive(z);
        auto order = f.exploration();
        for (size_t q = 1; q < order.size(); ++q)
            CHECK(leq_z(z, f.lo + order[q - 1], f.lo + order[q]));
    }
}

TEST_CASE("wpc and pcw: anti-involution") {
    // n = 1
    auto w1 = validate_tandem({{0, 0}});
    auto [z1, z1r] = wpc(w1);
    CHECK(pcw(z1, z1r).values == w1.values);

    for (int n = 1; n <= 5; ++n) {
        for (const auto& w : enumerate_tandem(n)) {
            auto [za, zb] = wpc(w);
            TandemWalk w1x = pcw(za, zb);
            CHECK(pcw_linear(w) .values == w1x.values);
            TandemWalk cur = w;
            for (int q = 0; q < 4; ++q) {
                auto [c1, c2] = wpc(cur);
                cur = pcw(c1, c2);
            }
            CHECK(cur.values == w.values);
            // two applications reverse and swap the walk
            TandemWalk twice = pcw_linear(pcw_linear(w));
            CHECK(twice.values == reverse_swap(w).values);
        }
    }
    Rng rng(53);
    for (int rep = 0; rep < 50; ++rep) {
        auto w = sample_tandem_biased(1000, rng);
        TandemWalk cur = w;
        for (int q = 0; q < 4; ++q) cur = pcw_linear(cur);
        CHECK(cur.values == w.values);
    }
}

TEST_CASE("trajectory increment law") {
    Rng rng(59);
    auto rep = trajectory_law_check(8, 1000000, rng);
    CHECK(rep.marginal.pvalue > 0.001);
    CHECK(rep.pairs.pvalue > 0.001);

    // direct masses: -1 has mass 1/2, 0 has mass 1/4
    int64_t minus = 0, zero = 0, total = 0;
    for (int q = 0; q < 200000; ++q) {
        int64_t z = 0;
        for (int t = 0; t < 4; ++t) {
            int64_t z2 = coal_step(z, sample_step(rng));
            int64_t d = z2 - z;
            z = z2;
            ++total;
            if (d == -1) ++minus;
            if (d == 0) ++zero;
        }
    }
    double sem_half = std::sqrt(0.25 / double(total));
    double sem_quarter = std::sqrt(0.1875 / double(total));
    CHECK(std::fabs(double(minus) / double(total) - 0.5) < 3 * sem_half);
    CHECK(std::fabs(double(zero) / double(total) - 0.25) < 3 * sem_quarter);
}

TEST_CASE("separable coalescent") {
    // single leaf
    SignedTree leaf;
    leaf.nodes.push_back({});
    auto sc = separable_coalescent(leaf);
    CHECK(sc.order == Permutation({1}));

    // all-plus tree gives the identity
    SignedTree t;
    t.nodes.resize(5);
    t.nodes[0].children = {1, 2};
    t.nodes[0].sign = +1;
    t.nodes[1].children = {3, 4};
    t.nodes[1].sign = +1;
    CHECK(separable_coalescent(t).order == Permutation::identity(3));
    // flipping the root sign reverses the two blocks
    t.nodes[0].sign = -1;
    CHECK(separable_coalescent(t).order == perm_of_signed_tree(t));
    CHECK(perm_of_signed_tree(t) == Permutation({2, 3, 1}));

    Rng rng(61);
    for (int rep = 0; rep < 200; ++rep) {
        auto tr = random_signed_tree(12, rng);
        auto scr = separable_coalescent(tr);  // throws if the orders disagree
        CHECK(is_baxter(scr.order));
        CHECK(int(scr.leaf_times.size()) == tr.leaf_count());
    }

    SignedTree badt;
    badt.nodes.resize(2);
    badt.nodes[0].children = {0};  // self loop
    CHECK_THROWS_AS(separable_coalescent(badt), error);
}

TEST_CASE("dense storage cap") {
    CHECK_THROWS_AS(CoalescentProcess(1, 20001), error);
}
