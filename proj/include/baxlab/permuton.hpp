#pragma once

#include <cstdint>
#include <vector>

#include "baxlab/permutation.hpp"
#include "baxlab/rng.hpp"
#include "baxlab/walk.hpp"

namespace baxlab {

// A permuton approximated on a k x k grid: mass(i,j) is the measure of the
// cell [(i-1)/k, i/k] x [(j-1)/k, j/k] (1-based i = x, j = y), with the
// measure taken uniform inside each cell. Invariants: total mass 1 within
// 1e-12, every row and column sum 1/k within 1e-9.
struct GridPermuton {
    int k = 0;
    std::vector<double> mass;  // row-major, mass[(i-1)*k + (j-1)]

    double& at(int i, int j) { return mass[size_t(i - 1) * size_t(k) + size_t(j - 1)]; }
    double at(int i, int j) const { return mass[size_t(i - 1) * size_t(k) + size_t(j - 1)]; }
};

// Throws BadParameter when the marginal invariants fail.
void validate_permuton(const GridPermuton& g);

// mu_sigma: resolution n, mass 1/n on the cells (i, sigma(i)).
GridPermuton mu_sigma(const Permutation& sigma);

// Exact re-gridding of the cell-uniform measure to resolution k2 (mass moves
// in proportion to cell overlap areas).
GridPermuton regrid(const GridPermuton& g, int k2);

// Clockwise quarter-turn of the grid measure (cell (i,j) -> (j, k+1-i)),
// matching rotate_star on permutation diagrams.
GridPermuton rotate_grid_cw(const GridPermuton& g);

// Rectangle distance sup_R |mu(R) - mu'(R)| over rectangles with grid-line
// corners, exact via row-range scans with max/min subarray sums, O(k^3).
// Both grids must share the resolution (ResolutionMismatch otherwise). For
// grid measures with uniform marginals this grid sup is within 4/k of the
// sup over all rectangles.
double d_square(const GridPermuton& a, const GridPermuton& b);

// k i.i.d. points of the grid measure (cell by mass, uniform jitter inside),
// x-sorted and y-standardized.
Permutation perm_k(const GridPermuton& mu, int k, Rng& rng);

// Empirical estimate of the expected Baxter permuton: `samples` uniform
// Baxter permutations of size about n (rejection window delta), each
// coarsened to a grid_k x grid_k permuton.
struct PermutonEstimate {
    GridPermuton mean;
    std::vector<GridPermuton> samples;
    std::vector<int64_t> realized_sizes;
};
PermutonEstimate baxter_permuton_estimate(int64_t n, int samples, Rng& rng, int grid_k = 64,
                                          double delta = 0.1);

// Coarsen a permutation's permuton directly (same result as
// regrid(mu_sigma(sigma), k) without materializing the n x n grid).
GridPermuton coarsen_mu_sigma(const Permutation& sigma, int k);

}  // namespace baxlab
