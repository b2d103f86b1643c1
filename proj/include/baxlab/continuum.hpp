#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "baxlab/rng.hpp"
#include "baxlab/walk.hpp"

namespace baxlab {

// Two-dimensional path sampled on a uniform time grid.
struct SampledPath2D {
    double dt = 0.0;
    std::vector<std::pair<double, double>> values;

    size_t steps() const { return values.size() - 1; }
    double duration() const { return dt * double(steps()); }
};

// One Euler trajectory of the flow dZ = 1_{Z>0} dY - 1_{Z<=0} dX started at
// grid point start (value 0 there, 0 before).
struct FlowSolution {
    size_t start = 0;
    double dt = 0.0;
    std::vector<double> values;  // aligned with the driving grid
};

// Correlated Brownian pair: per-step covariance dt * ((1, rho), (rho, 1)).
SampledPath2D sample_correlated_bm(double rho, double dt, double T, Rng& rng);

// Explicit Euler with the exact indicator split: Z_{k+1} = Z_k + dY_k when
// Z_k > 0, else Z_k - dX_k. u is a grid index (OffGridStart otherwise).
FlowSolution solve_flow(const SampledPath2D& w, size_t u);

// Family of Euler trajectories driven by the same path, merged at their
// first meeting (the discrete rule coalesces the same way); after merging
// two trajectories are identical, so the family never crosses.
std::vector<FlowSolution> solve_flow_family(const SampledPath2D& w, const std::vector<size_t>& starts);

// (1/2eps) * dt * #{grid s <= t : |Z(s)| < eps}, nondecreasing in t.
// eps defaults to sqrt(dt) when passed as 0.
std::vector<double> local_time_estimate(const FlowSolution& z, double eps = 0.0);

// Endpoint density g(x1,x2) = (1/sqrt(3 pi)) x1 x2 (x1+x2)
// exp(-(x1^2+x2^2+x1x2)/3).
double g_density(double x1, double x2);

// Quadrature of g over the quadrant, truncated at radius R with the Gaussian
// tail bound reported.
struct QuadratureResult {
    double value = 0.0;
    double error_bound = 0.0;  // truncation + grid refinement estimate
};
QuadratureResult integrate_g_quadrant(double radius = 12.0);

// Excursion-over-free-path tilting density evaluated at a = the running
// componentwise infimum (a <= 0) and b = the displacement at time 1-2eps:
// alpha_eps(a,b) = sqrt(3)/(8 eps^4) * integral over {x : x + a/sqrt(eps) in
// the quadrant} of g2(x) g2(x + b/sqrt(eps)) dx with g2(u) = 2 g(sqrt2 u)
// clipped to the quadrant. Satisfies E[alpha_eps(inf W, W(1-2eps))] = 1 over
// the correlated Brownian path. eps must lie in (0, 1/2).
QuadratureResult alpha_eps(double eps, std::pair<double, double> a, std::pair<double, double> b,
                           double radius = 9.0, int panels = 160);

// Bias of a minimum taken over a dt-grid of a unit-variance Brownian path:
// subtract this from grid minima before feeding them to alpha_eps.
double grid_min_debias(double dt);

// Diffusive rescaling of a uniform tandem walk: W(floor(nt))/sqrt(2n) on a
// grid of n_grid points, used as excursion-like driving noise.
SampledPath2D excursion_proxy(int64_t n_grid, Rng& rng, double delta = 0.1);
SampledPath2D rescale_walk(const TandemWalk& w);

// Level function estimate: solves the flow from m_grid equispaced starts
// anchored at u (so u itself is one of them) and returns the fraction of
// starts ordered below u by the flow comparisons.
double phi_estimate(const SampledPath2D& w, size_t u, int m_grid);

}  // namespace baxlab
