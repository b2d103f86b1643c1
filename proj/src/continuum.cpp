#include "baxlab/continuum.hpp"

#include <algorithm>
#include <cmath>

namespace baxlab {

SampledPath2D sample_correlated_bm(double rho, double dt, double T, Rng& rng) {
    if (!(rho >= -1.0 && rho <= 1.0) || !(dt > 0) || !(T > 0))
        throw error(errc::bad_parameter, "need rho in [-1,1], dt > 0, T > 0");
    const size_t nsteps = size_t(std::llround(T / dt));
    SampledPath2D p;
    p.dt = dt;
    p.values.resize(nsteps + 1);
    p.values[0] = {0.0, 0.0};
    const double sq = std::sqrt(dt);
    const double c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    double x = 0, y = 0;
    for (size_t k = 0; k < nsteps; ++k) {
        double g1 = rng.gaussian(), g2 = rng.gaussian();
        x += sq * g1;
        y += sq * (rho * g1 + c * g2);
        p.values[k + 1] = {x, y};
    }
    return p;
}

FlowSolution solve_flow(const SampledPath2D& w, size_t u) {
    if (u >= w.values.size()) throw error(errc::off_grid_start, "start index beyond the grid");
    FlowSolution z;
    z.start = u;
    z.dt = w.dt;
    z.values.assign(w.values.size(), 0.0);
    double v = 0.0;
    for (size_t k = u; k + 1 < w.values.size(); ++k) {
        const double dx = w.values[k + 1].first - w.values[k].first;
        const double dy = w.values[k + 1].second - w.values[k].second;
        v += (v > 0.0) ? dy : -dx;
        z.values[k + 1] = v;
    }
    return z;
}

std::vector<FlowSolution> solve_flow_family(const SampledPath2D& w, const std::vector<size_t>& starts) {
    std::vector<FlowSolution> out;
    out.reserve(starts.size());
    for (size_t u : starts) {
        if (u >= w.values.size()) throw error(errc::off_grid_start, "start index beyond the grid");
        out.push_back(FlowSolution{u, w.dt, std::vector<double>(w.values.size(), 0.0)});
    }
    const size_t T = w.values.size();

    // Born trajectories kept in bottom-to-top order; the Euler update
    // preserves that order except where a straddling pair inverts, in which
    // case the lower trajectory snaps onto the upper one (absorbing merge,
    // the same resolution the discrete rule applies at a coalescence).
    std::vector<size_t> order;  // trajectory ids, ordered by current value
    std::vector<double> cur(starts.size(), 0.0);
    std::vector<std::vector<size_t>> born_at(T);
    for (size_t q = 0; q < starts.size(); ++q) born_at[starts[q]].push_back(q);

    for (size_t k = 0; k + 1 < T; ++k) {
        for (size_t q : born_at[k]) {
            cur[q] = 0.0;
            auto it = std::upper_bound(order.begin(), order.end(), 0.0,
                                       [&](double v, size_t id) { return v < cur[id]; });
            order.insert(it, q);
        }
        const double dx = w.values[k + 1].first - w.values[k].first;
        const double dy = w.values[k + 1].second - w.values[k].second;
        for (size_t id : order) cur[id] += (cur[id] > 0.0) ? dy : -dx;
        for (size_t r = order.size(); r-- > 1;)
            if (cur[order[r - 1]] > cur[order[r]]) cur[order[r - 1]] = cur[order[r]];
        for (size_t id : order) out[id].values[k + 1] = cur[id];
    }
    return out;
}

std::vector<double> local_time_estimate(const FlowSolution& z, double eps) {
    if (eps < 0) throw error(errc::bad_parameter, "eps must be positive");
    if (eps == 0.0) eps = std::sqrt(z.dt);
    std::vector<double> lt(z.values.size(), 0.0);
    double acc = 0.0;
    const double w = z.dt / (2.0 * eps);
    for (size_t k = z.start; k < z.values.size(); ++k) {
        if (std::fabs(z.values[k]) < eps) acc += w;
        lt[k] = acc;
    }
    return lt;
}

double g_density(double x1, double x2) {
    static const double c = 1.0 / std::sqrt(3.0 * M_PI);
    return c * x1 * x2 * (x1 + x2) * std::exp(-(x1 * x1 + x2 * x2 + x1 * x2) / 3.0);
}

namespace {

// Composite Gauss-Legendre (4-point) on [lo, hi] with `panels` panels.
template <class F>
double gl4(F&& f, double lo, double hi, int panels) {
    static const double xs[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                 0.8611363115940526};
    static const double ws[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                 0.3478548451374538};
    const double h = (hi - lo) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = lo + p * h, mid = a + 0.5 * h, half = 0.5 * h;
        double s = 0.0;
        for (int q = 0; q < 4; ++q) s += ws[q] * f(mid + half * xs[q]);
        total += s * half;
    }
    return total;
}

// Gaussian tail bound for integrals of g outside [0,R]^2: on the quadrant
// g <= c x1 x2 (x1+x2) e^{-(x1^2+x2^2)/3} and the polynomial is beaten by
// one factor e^{-R^2/12} beyond radius R.
double g_tail_bound(double R) {
    return 4.0 * std::exp(-R * R / 6.0) * (R * R + 6.0);
}

}  // namespace

QuadratureResult integrate_g_quadrant(double radius) {
    auto inner = [&](double x1, int panels) {
        return gl4([&](double x2) { return g_density(x1, x2); }, 0.0, radius, panels);
    };
    auto whole = [&](int panels) {
        return gl4([&](double x1) { return inner(x1, panels); }, 0.0, radius, panels);
    };
    QuadratureResult r;
    const double coarse = whole(48), fine = whole(96);
    r.value = fine;
    r.error_bound = std::fabs(fine - coarse) + g_tail_bound(radius);
    return r;
}

QuadratureResult alpha_eps(double eps, std::pair<double, double> a, std::pair<double, double> b,
                           double radius, int panels) {
    if (!(eps > 0.0 && eps < 0.5)) throw error(errc::bad_epsilon, "need eps in (0, 1/2)");
    // Tilting density of the quadrant excursion against the free path: both
    // junction factors carry the corner profile at the walk's own covariance,
    // g2(u) = 2 g(sqrt(2) u), and the a, b arguments enter on the epsilon
    // diffusive scale. The normalization is pinned by the exact expectation
    // identity E[alpha_eps(inf W, W(1-2eps))] = 1, which the tests enforce.
    const double se = std::sqrt(eps);
    const double lo1 = std::max(0.0, -a.first / se), lo2 = std::max(0.0, -a.second / se);
    auto g2 = [](double x1, double x2) {
        if (x1 < 0 || x2 < 0) return 0.0;
        return 2.0 * g_density(M_SQRT2 * x1, M_SQRT2 * x2);
    };
    auto integrand = [&](double x1, double x2) {
        return g2(x1, x2) * g2(x1 + b.first / se, x2 + b.second / se);
    };
    auto whole = [&](int p) {
        if (lo1 >= radius || lo2 >= radius) return 0.0;
        return gl4(
            [&](double x1) {
                return gl4([&](double x2) { return integrand(x1, x2); }, lo2, radius, p);
            },
            lo1, radius, p);
    };
    const double scale = std::sqrt(3.0) / (8.0 * std::pow(eps, 4));
    QuadratureResult r;
    const double coarse = whole(panels / 2), fine = whole(panels);
    r.value = scale * fine;
    // sup g2 is below 0.6; the tail factor is the g2 mass beyond the radius
    r.error_bound = scale * (std::fabs(fine - coarse) + 0.6 * g_tail_bound(radius * M_SQRT2));
    return r;
}

double grid_min_debias(double dt) { return 0.5826 * std::sqrt(dt); }

SampledPath2D rescale_walk(const TandemWalk& w) {
    const int64_t n = w.size();
    SampledPath2D p;
    p.dt = 1.0 / double(n);
    p.values.resize(size_t(n));
    const double s = 1.0 / std::sqrt(2.0 * double(n));
    for (int64_t k = 0; k < n; ++k)
        p.values[size_t(k)] = {double(w.values[size_t(k)].first) * s,
                               double(w.values[size_t(k)].second) * s};
    return p;
}

SampledPath2D excursion_proxy(int64_t n_grid, Rng& rng, double delta) {
    if (n_grid < 1000) throw error(errc::bad_parameter, "excursion proxy needs n >= 1000");
    auto r = sample_uniform_tandem(n_grid, delta, rng);
    return rescale_walk(r.walk);
}

double phi_estimate(const SampledPath2D& w, size_t u, int m_grid) {
    if (u >= w.values.size()) throw error(errc::off_grid_start, "start index beyond the grid");
    if (m_grid < 1) throw error(errc::bad_parameter, "need m_grid >= 1");
    const size_t T = w.values.size();
    // Equispaced starting points anchored at u, so u is always among them.
    // Each comparison uses its own Euler trajectory, exactly as in the
    // order-defining inequalities: x before u needs Z^(x)(u) < 0, x after u
    // is below u when Z^(u)(x) >= 0.
    FlowSolution zu = solve_flow(w, u);
    int64_t below = 0;
    for (int r = 0; r < m_grid; ++r) {
        const size_t x = r == 0 ? u : (u + size_t(double(r) / m_grid * double(T))) % T;
        if (x == u) ++below;  // reflexive
        else if (x < u) {
            if (solve_flow(w, x).values[u] < 0) ++below;  // x <=_Z u
        } else {
            if (zu.values[x] >= 0) ++below;  // not (u <=_Z x)
        }
    }
    return double(below) / double(m_grid);
}

}  // namespace baxlab
