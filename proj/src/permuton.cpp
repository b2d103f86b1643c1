#include "baxlab/permuton.hpp"

#include <algorithm>
#include <cmath>

#include "baxlab/coalescent.hpp"

namespace baxlab {

void validate_permuton(const GridPermuton& g) {
    if (g.k < 1 || g.mass.size() != size_t(g.k) * size_t(g.k))
        throw error(errc::bad_parameter, "grid shape mismatch");
    double total = 0;
    for (double v : g.mass) {
        if (v < 0) throw error(errc::bad_parameter, "negative cell mass");
        total += v;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw error(errc::bad_parameter, "total mass not 1");
    const double want = 1.0 / g.k;
    for (int i = 1; i <= g.k; ++i) {
        double row = 0, col = 0;
        for (int j = 1; j <= g.k; ++j) {
            row += g.at(i, j);
            col += g.at(j, i);
        }
        if (std::fabs(row - want) > 1e-9 || std::fabs(col - want) > 1e-9)
            throw error(errc::bad_parameter, "marginals not uniform");
    }
}

GridPermuton mu_sigma(const Permutation& sigma) {
    const int n = sigma.size();
    if (n < 1) throw error(errc::bad_parameter, "mu_sigma needs n >= 1");
    GridPermuton g;
    g.k = n;
    g.mass.assign(size_t(n) * size_t(n), 0.0);
    for (int i = 1; i <= n; ++i) g.at(i, sigma(i)) = 1.0 / n;
    return g;
}

namespace {

// Overlap weights of source intervals [(a-1)/k1, a/k1] against target
// intervals [(b-1)/k2, b/k2]: a 1-d mass split reused for rows and columns.
struct Split {
    // for each source cell: first target cell and the weights across it
    std::vector<int> first;
    std::vector<std::vector<double>> weights;  // fractions summing to 1
};

Split make_split(int k1, int k2) {
    Split s;
    s.first.resize(size_t(k1));
    s.weights.resize(size_t(k1));
    for (int a = 0; a < k1; ++a) {
        const double lo = double(a) / k1, hi = double(a + 1) / k1;
        int b0 = std::min(k2 - 1, int(std::floor(lo * k2 + 1e-12)));
        s.first[size_t(a)] = b0;
        for (int b = b0; b < k2; ++b) {
            const double blo = double(b) / k2, bhi = double(b + 1) / k2;
            double ov = std::min(hi, bhi) - std::max(lo, blo);
            if (ov <= 1e-15 && b > b0) break;
            s.weights[size_t(a)].push_back(std::max(0.0, ov) * k1);  // fraction of the source cell
        }
    }
    return s;
}

}  // namespace

GridPermuton regrid(const GridPermuton& g, int k2) {
    if (k2 < 1) throw error(errc::bad_parameter, "target resolution must be >= 1");
    if (k2 == g.k) return g;
    Split sx = make_split(g.k, k2);
    GridPermuton out;
    out.k = k2;
    out.mass.assign(size_t(k2) * size_t(k2), 0.0);
    for (int i = 0; i < g.k; ++i) {
        for (int j = 0; j < g.k; ++j) {
            double v = g.mass[size_t(i) * size_t(g.k) + size_t(j)];
            if (v == 0) continue;
            const auto& wi = sx.weights[size_t(i)];
            const auto& wj = sx.weights[size_t(j)];
            for (size_t a = 0; a < wi.size(); ++a)
                for (size_t b = 0; b < wj.size(); ++b)
                    out.mass[size_t(sx.first[size_t(i)] + int(a)) * size_t(k2) +
                             size_t(sx.first[size_t(j)] + int(b))] += v * wi[a] * wj[b];
        }
    }
    return out;
}

GridPermuton coarsen_mu_sigma(const Permutation& sigma, int k) {
    const int n = sigma.size();
    Split s = make_split(n, k);
    GridPermuton out;
    out.k = k;
    out.mass.assign(size_t(k) * size_t(k), 0.0);
    const double v = 1.0 / n;
    for (int i = 1; i <= n; ++i) {
        const auto& wi = s.weights[size_t(i) - 1];
        const auto& wj = s.weights[size_t(sigma(i)) - 1];
        for (size_t a = 0; a < wi.size(); ++a)
            for (size_t b = 0; b < wj.size(); ++b)
                out.mass[size_t(s.first[size_t(i) - 1] + int(a)) * size_t(k) +
                         size_t(s.first[size_t(sigma(i)) - 1] + int(b))] += v * wi[a] * wj[b];
    }
    return out;
}

GridPermuton rotate_grid_cw(const GridPermuton& g) {
    GridPermuton out;
    out.k = g.k;
    out.mass.assign(g.mass.size(), 0.0);
    for (int i = 1; i <= g.k; ++i)
        for (int j = 1; j <= g.k; ++j) out.at(j, g.k + 1 - i) = g.at(i, j);
    return out;
}

double d_square(const GridPermuton& a, const GridPermuton& b) {
    if (a.k != b.k) throw error(errc::resolution_mismatch, "regrid to a common resolution first");
    const int k = a.k;
    std::vector<double> diff(size_t(k) * size_t(k));
    for (size_t q = 0; q < diff.size(); ++q) diff[q] = a.mass[q] - b.mass[q];

    // sup over rectangles [i1..i2] x [j1..j2] of |sum|: fix the row range,
    // accumulate column sums, take the best positive and negative subarrays
    double best = 0.0;
    std::vector<double> col(size_t(k), 0.0);
    for (int i1 = 0; i1 < k; ++i1) {
        std::fill(col.begin(), col.end(), 0.0);
        for (int i2 = i1; i2 < k; ++i2) {
            const double* row = &diff[size_t(i2) * size_t(k)];
            for (int j = 0; j < k; ++j) col[size_t(j)] += row[j];
            double run_max = 0, run_min = 0;
            for (int j = 0; j < k; ++j) {
                run_max = std::max(0.0, run_max + col[size_t(j)]);
                run_min = std::min(0.0, run_min + col[size_t(j)]);
                best = std::max(best, std::max(run_max, -run_min));
            }
        }
    }
    return best;
}

Permutation perm_k(const GridPermuton& mu, int k, Rng& rng) {
    if (k < 1) throw error(errc::bad_parameter, "need k >= 1");
    std::vector<double> cdf(mu.mass.size());
    double acc = 0;
    for (size_t q = 0; q < mu.mass.size(); ++q) {
        acc += mu.mass[q];
        cdf[q] = acc;
    }
    std::vector<std::pair<double, double>> pts{size_t(k)};
    for (int q = 0; q < k; ++q) {
        double u = rng.uniform01() * acc;
        size_t cell = size_t(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (cell >= mu.mass.size()) cell = mu.mass.size() - 1;
        int ci = int(cell) / mu.k, cj = int(cell) % mu.k;
        pts[size_t(q)] = {(ci + rng.uniform01()) / mu.k, (cj + rng.uniform01()) / mu.k};
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> ys(size_t(k), 0.0);
    for (int q = 0; q < k; ++q) ys[size_t(q)] = pts[size_t(q)].second;
    return std_of(std::span<const double>(ys));
}

PermutonEstimate baxter_permuton_estimate(int64_t n, int samples, Rng& rng, int grid_k, double delta) {
    if (n < 100) throw error(errc::bad_parameter, "permuton estimate needs n >= 100");
    if (samples < 1) throw error(errc::bad_parameter, "need at least one sample");
    PermutonEstimate est;
    est.mean.k = grid_k;
    est.mean.mass.assign(size_t(grid_k) * size_t(grid_k), 0.0);
    for (int s = 0; s < samples; ++s) {
        auto r = sample_uniform_tandem(n, delta, rng);
        Permutation sigma = cp_linear(r.walk);
        GridPermuton g = coarsen_mu_sigma(sigma, grid_k);
        validate_permuton(g);
        for (size_t q = 0; q < g.mass.size(); ++q) est.mean.mass[q] += g.mass[q];
        est.samples.push_back(std::move(g));
        est.realized_sizes.push_back(r.realized_size);
    }
    for (double& v : est.mean.mass) v /= samples;
    return est;
}

}  // namespace baxlab
