#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "baxlab/permutation.hpp"
#include "baxlab/rng.hpp"
#include "baxlab/stats.hpp"
#include "baxlab/walk.hpp"

namespace baxlab {

// One step of a coalescent trajectory under the driving increment s:
//   (+1,-1)            -> z - 1
//   (-i,j), z >= 0     -> z + j
//   (-i,j), z <  -i    -> z + i
//   (-i,j), -i <= z <0 -> j        (coalescence with the fresh trajectory)
inline int64_t coal_step(int64_t z, Step s) {
    if (s.dx == 1 && s.dy == -1) return z - 1;
    const int64_t i = -s.dx, j = s.dy;
    if (z >= 0) return z + j;
    if (z < -i) return z + i;
    return j;
}

// Dense triangular storage of the family {Z^{(t)}_s : t <= s}, t, s in
// I = [lo, lo+n-1]. Memory is O(n^2); construction is capped at n = 20000,
// beyond which only the forest/permutation path is available.
class CoalescentProcess {
  public:
    CoalescentProcess() = default;
    CoalescentProcess(int64_t lo, int64_t n);

    int64_t lo() const { return lo_; }
    int64_t n() const { return n_; }
    int64_t hi() const { return lo_ + n_ - 1; }

    // Z^{(t)}_s, requires lo <= t <= s <= hi.
    int32_t at(int64_t t, int64_t s) const {
        check_range(t, s);
        return data_[row_off_[size_t(t - lo_)] + size_t(s - t)];
    }

    int32_t& at_mut(int64_t t, int64_t s) {
        check_range(t, s);
        return data_[row_off_[size_t(t - lo_)] + size_t(s - t)];
    }

  private:
    void check_range(int64_t t, int64_t s) const;
    int64_t lo_ = 1, n_ = 0;
    std::vector<size_t> row_off_;
    std::vector<int32_t> data_;
};

// The coalescent-walk process driven by a walk with steps in A (Def. of the
// three-case rule above, applied to every start time in the interval).
CoalescentProcess wc(std::span<const Step> steps, int64_t lo = 1);
CoalescentProcess wc(const TandemWalk& w);
CoalescentProcess wc(const LatticeWalk& w);

// The total order: i <=_Z j iff i == j, or i < j and Z^{(i)}_j < 0,
// or j < i and Z^{(j)}_i >= 0.
bool leq_z(const CoalescentProcess& z, int64_t i, int64_t j);

// The permutation of [n]: sigma(i) <= sigma(j) iff i <=_Z j (interval must
// start at lo = 1). Throws NotTotalOrder if the comparisons are inconsistent.
Permutation cp(const CoalescentProcess& z);

// Zero-visit count of trajectory i on [i, j].
int64_t local_time(const CoalescentProcess& z, int64_t i, int64_t j);

// Z-planted plane forest with edges labeled by I, stored as
// parent/first-child/next-sibling triples over label offsets (t - lo).
struct PlantedForest {
    int64_t lo = 1;
    int64_t n = 0;
    std::vector<int32_t> parent;        // -1 for planted roots
    std::vector<int32_t> first_child;   // -1 none; siblings ordered by <=_Z
    std::vector<int32_t> next_sibling;  // -1 none
    std::vector<int32_t> roots;         // tree sequence, root indices weakly increasing
    std::vector<int64_t> root_index;    // aligned with roots

    bool operator==(const PlantedForest&) const = default;

    // Edges in forest-exploration order (offsets).
    std::vector<int32_t> exploration() const;
    // Depth of each edge inside its tree (root edge = 0).
    std::vector<int32_t> depth() const;
};

// Forest of a coalescent process: parent of i is the first j > i with
// Z^{(i)}_j = 0; children ordered by <=_Z; trees ordered by root <=_Z; the
// tree whose root-edge is i carries index Z^{(i)}_{max I}. Naive O(n^2)
// construction from dense trajectories.
PlantedForest fortree_naive(const CoalescentProcess& z);

// Same forest in O(n) amortized, streaming over the driving increments with
// an index-offset stack; no trajectory storage.
PlantedForest fortree_linear(std::span<const Step> steps, int64_t lo = 1);
PlantedForest fortree_linear(const TandemWalk& w);

PlantedForest fortree(const CoalescentProcess& z);  // alias of fortree_naive

// Permutation read off a forest on [1,n]: sigma(i) = position of edge i in
// the forest exploration.
Permutation cp_from_forest(const PlantedForest& f);

// Linear-time cp of a tandem walk via the incremental forest.
Permutation cp_linear(const TandemWalk& w);

// wpc(W) = (wc(W), wc(reverse_swap(W))).
std::pair<CoalescentProcess, CoalescentProcess> wpc(const TandemWalk& w);

// pcw(Z, Zrev): X*_i = L_Z^{(sigma^{-1}(i))}(n) - 1, Y*_i =
// L_Zrev^{(sigma*(i))}(n) - 1 with sigma = cp(Z). Validates the output
// (NotInImage on failure).
TandemWalk pcw(const CoalescentProcess& z, const CoalescentProcess& z_rev);

// Same map computed in O(n) from the two forests (local time at the horizon
// equals tree depth + 1).
TandemWalk pcw_linear(const TandemWalk& w);

// Chi-square report for the law of a trajectory of the infinite-volume
// coalescent: increments must be iid with law (-1 w.p. 1/2, +v w.p.
// 2^{-v-2}). Bins with expected count below 10 are pooled into the tail.
struct TrajectoryLawReport {
    stats::Chi2Result marginal;
    stats::Chi2Result pairs;  // consecutive increments vs independence
    uint64_t samples = 0;
    bool pass(double alpha) const { return marginal.pvalue > alpha && pairs.pvalue > alpha; }
};
TrajectoryLawReport trajectory_law_check(int k, uint64_t samples, Rng& rng);

// Rooted plane tree with {+,-} signs on internal vertices.
struct SignedTree {
    struct Node {
        std::vector<int> children;
        int sign = +1;  // +1 plus, -1 minus; meaningful for internal nodes only
    };
    std::vector<Node> nodes;
    int root = 0;

    int leaf_count() const;
    void validate() const;  // throws MalformedTree
};

SignedTree random_signed_tree(int max_leaves, Rng& rng);

// perm(t): reverse the order of the children of each minus vertex, then read
// off where each leaf lands in the new exploration order.
Permutation perm_of_signed_tree(const SignedTree& t);

// Contour-driven coalescent for separable permutations: trajectories started
// at leaf-visit times, five-case increment rule, ordering by <=_Z. Asserts
// the ordering equals perm_of_signed_tree(t) and returns both.
struct SeparableCoalescent {
    std::vector<int> leaf_times;             // contour times of the leaves
    std::vector<std::vector<int>> trajectories;  // one per leaf, on [time, 2e]
    Permutation order;
};
SeparableCoalescent separable_coalescent(const SignedTree& t);

}  // namespace baxlab
