#include <doctest.h>

#include "baxlab/bipolar.hpp"
#include "baxlab/coalescent.hpp"

using namespace baxlab;

namespace {

TandemWalk running_walk() {
    return validate_tandem({{0, 2}, {0, 3}, {0, 3}, {1, 2}, {2, 1}, {0, 3}, {1, 2}, {2, 1}, {3, 0}, {2, 0}});
}

}  // namespace

TEST_CASE("theta base case and single step") {
    auto m1 = theta(std::vector<Step>{}, 1);
    CHECK(m1.map.n_edges() == 1);
    CHECK(m1.map.faces.empty());
    CHECK(m1.fully_explored());

    auto m2 = to_plain(theta(validate_tandem({{0, 1}, {1, 0}})));
    CHECK(m2.n_edges() == 2);
    CHECK(m2.faces.empty());  // two edges in series

    auto m3 = to_plain(theta(validate_tandem({{0, 0}, {0, 0}})));
    CHECK(m3.n_edges() == 2);
    CHECK(m3.faces.size() == 1);  // parallel edges around a bigon
    CHECK(m3.faces[0].left.size() == 1);
    CHECK(m3.faces[0].right.size() == 1);
}

TEST_CASE("theta on the walk that is not a tandem walk") {
    LatticeWalk w;
    w.lo = 5;
    w.steps = {Step{-2, 0}, Step{1, -1}, Step{-3, 2}};
    auto m = theta(w);  // validate_marked runs inside
    CHECK(m.lo == 5);
    CHECK(m.label_edge.size() == 4);
    CHECK_FALSE(m.fully_explored());
    int unexplored = 0;
    for (int e = 0; e < m.map.n_edges(); ++e)
        if (!m.explored(e)) ++unexplored;
    CHECK(unexplored > 0);
    CHECK(increments_of(m) == w.steps);
}

TEST_CASE("running example: bow, op, heights") {
    auto w = running_walk();
    auto m = to_plain(theta(w));
    CHECK(bow(m).values == w.values);
    CHECK(op(m) == Permutation({8, 6, 5, 7, 9, 1, 2, 4, 10, 3}));

    auto t = down_right_tree(m);
    // edges of the theta map are labeled in exploration order
    for (int e = 0; e < m.n_edges(); ++e) CHECK(t.rank[size_t(e)] == e + 1);
    // (0, X_1+1, ..., X_n+1) is the height process of T(m)
    CHECK(t.height_process[0] == 0);
    for (int q = 1; q <= m.n_edges(); ++q)
        CHECK(t.height_process[size_t(q)] == w.values[size_t(q) - 1].first + 1);

    // single-edge map
    auto m1 = to_plain(theta(validate_tandem({{0, 0}})));
    CHECK(bow(m1).values == std::vector<std::pair<int64_t, int64_t>>{{0, 0}});
    CHECK(op(m1) == Permutation({1}));
    CHECK(down_right_tree(m1).order == std::vector<int>{0});
}

TEST_CASE("exploration of the reversed map runs backwards") {
    for (int n = 1; n <= 5; ++n) {
        for (const auto& w : enumerate_tandem(n)) {
            auto m = to_plain(theta(w));
            auto rev = reverse_orientation(m);
            auto t = down_right_tree(rev);
            for (int q = 0; q < n; ++q) CHECK(t.order[size_t(q)] == n - 1 - q);
        }
    }
}

TEST_CASE("round trips and dualities, exhaustive n <= 5") {
    for (int n = 1; n <= 5; ++n) {
        for (const auto& w : enumerate_tandem(n)) {
            auto mk = theta(w);
            auto m = to_plain(mk);
            CHECK(bow(m).values == w.values);
            CHECK(canonical_signature(to_plain(theta(bow(m)))) == canonical_signature(m));
            CHECK(increments_of(mk) == w.steps());

            auto d = dual(m);
            CHECK(d.n_edges() == m.n_edges());
            CHECK(canonical_signature(dual(dual(dual(dual(m))))) == canonical_signature(m));
            CHECK(canonical_signature(dual(d)) == canonical_signature(reverse_orientation(m)));
            CHECK(canonical_signature(reverse_orientation(reverse_orientation(m))) ==
                  canonical_signature(m));
            CHECK(bow(reverse_orientation(m)).values == reverse_swap(w).values);
            CHECK(op(d) == rotate_star(op(m)));
        }
    }
}

TEST_CASE("diagram commutation cp(wc) = op(theta), exhaustive n <= 6") {
    for (int n = 1; n <= 6; ++n)
        for (const auto& w : enumerate_tandem(n)) CHECK(cp(wc(w)) == op(to_plain(theta(w))));
}

TEST_CASE("dual forest equals the coalescent forest") {
    for (int n = 1; n <= 5; ++n)
        for (const auto& w : enumerate_tandem(n)) CHECK(dual_forest(theta(w)) == fortree_naive(wc(w)));

    // coordinates bounded walks over the full step alphabet, including
    // non-tandem ones
    Rng rng(67);
    for (int rep = 0; rep < 150; ++rep) {
        auto w = sample_nu_walk(3 + int64_t(rng.below(60)), rng);
        CHECK(dual_forest(theta(w)) == fortree_linear(w.steps, w.lo));
        CHECK(op_marked(theta(w)) == cp_from_forest(fortree_linear(w.steps, w.lo)));
    }

    // for a plain map the forest is T(m*) disconnected at its root
    auto w = running_walk();
    auto f = dual_forest(theta(w));
    auto td = down_right_tree(dual(to_plain(theta(w))));
    auto order = f.exploration();
    for (size_t q = 0; q < order.size(); ++q) CHECK(td.rank[size_t(order[q])] == int(q) + 1);
    for (int64_t idx : f.root_index) CHECK(idx <= 0);

    // single edge
    auto f1 = dual_forest(theta(std::vector<Step>{}, 0));
    CHECK(f1.roots.size() == 1);
    CHECK(f1.root_index == std::vector<int64_t>{0});
}

TEST_CASE("restriction") {
    auto w = running_walk();
    auto m = theta(w);
    CHECK(canonical_signature(restrict_marked(m, 1, 10)) == canonical_signature(m));
    const std::vector<Step> all_steps = w.steps();
    for (int64_t k = 1; k <= 10; ++k) {
        std::vector<Step> prefix(all_steps.begin(), all_steps.begin() + (k - 1));
        CHECK(canonical_signature(restrict_marked(m, 1, k)) == canonical_signature(theta(prefix, 1)));
    }
    Rng rng(71);
    for (int rep = 0; rep < 60; ++rep) {
        auto wr = sample_nu_walk(30, rng);
        auto mr = theta(wr);
        int64_t a = 1 + int64_t(rng.below(10)), b = 30 - int64_t(rng.below(10));
        auto r1 = restrict_marked(mr, a, b);
        int64_t c = a + int64_t(rng.below(5)), d = b - int64_t(rng.below(5));
        if (c > d) continue;
        CHECK(canonical_signature(restrict_marked(r1, c, d)) ==
              canonical_signature(restrict_marked(mr, c, d)));
    }
    CHECK_THROWS_AS(restrict_marked(m, 0, 5), error);
    CHECK_THROWS_AS(restrict_marked(m, 2, 11), error);
}

TEST_CASE("outdegree bound from the trajectory stopping times") {
    auto check_bound = [](const LatticeWalk& w) {
        auto m = theta(w);
        auto z = wc(w);
        const int64_t lo = z.lo(), hi = z.hi();
        for (int64_t i = lo; i <= hi; ++i) {
            int64_t j = -1;
            for (int64_t q = i; q < hi; ++q)
                if (z.at(i, q) == 0 && z.at(i, q + 1) < 0) {
                    j = q;
                    break;
                }
            if (j < 0) continue;
            int64_t s = -1;
            for (int64_t q = j + 2; q <= hi; ++q)
                if (z.at(i, q) >= 0) {
                    s = q;
                    break;
                }
            if (s < 0) continue;
            int e = m.label_edge[size_t(i - lo)];
            int v = m.map.edges[size_t(e)].top;
            CHECK(int64_t(m.map.vertices[size_t(v)].out.size()) <= s - j - 1);
        }
    };
    for (int n = 1; n <= 6; ++n)
        for (const auto& w : enumerate_tandem(n)) {
            LatticeWalk lw;
            lw.lo = 1;
            lw.steps = w.steps();
            check_bound(lw);
        }
    Rng rng(73);
    for (int rep = 0; rep < 40; ++rep) check_bound(sample_nu_walk(200, rng));
}

TEST_CASE("reverse orientation is an involution on larger random maps") {
    Rng rng(79);
    for (int rep = 0; rep < 100; ++rep) {
        auto m = to_plain(theta(sample_tandem_biased(1000, rng)));
        CHECK(canonical_signature(reverse_orientation(reverse_orientation(m))) == canonical_signature(m));
    }
}

TEST_CASE("map artifacts stay valid through every constructor") {
    Rng rng(83);
    for (int rep = 0; rep < 25; ++rep) {
        auto w = sample_tandem_biased(80, rng);
        auto m = to_plain(theta(w));  // validates
        validate_bipolar(dual(m));
        validate_bipolar(reverse_orientation(m));
        validate_marked(restrict_marked(theta(w), 2, 40));
    }
}
