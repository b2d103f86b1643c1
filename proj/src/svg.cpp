#include "baxlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace baxlab {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string header(int w, int h) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return os.str();
}

}  // namespace

std::string svg_permutation(const Permutation& p, int size_px) {
    const int n = p.size();
    const double pad = size_px * 0.03;
    const double span = size_px - 2 * pad;
    const double r = std::max(0.4, std::min(3.0, span / (2.5 * std::max(1, n))));
    std::ostringstream os;
    os << header(size_px, size_px);
    for (int i = 1; i <= n; ++i) {
        double x = pad + span * (i - 0.5) / n;
        double y = pad + span * (1.0 - (p(i) - 0.5) / n);
        os << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"" << fmt(r)
           << "\" fill=\"black\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

namespace {

std::string polyline(const std::vector<std::pair<double, double>>& pts, const char* color) {
    std::ostringstream os;
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
    for (auto [x, y] : pts) os << fmt(x) << ',' << fmt(y) << ' ';
    os << "\"/>\n";
    return os.str();
}

}  // namespace

std::string svg_walk(const TandemWalk& w, int size_px) {
    const int64_t n = w.size();
    int64_t vmax = 1;
    for (auto [x, y] : w.values) vmax = std::max({vmax, x, y});
    const double pad = size_px * 0.03;
    const double sx = (size_px - 2 * pad) / double(std::max<int64_t>(1, n - 1));
    const double sy = (size_px - 2 * pad) / double(vmax);
    std::vector<std::pair<double, double>> xs, ys;
    for (int64_t t = 0; t < n; ++t) {
        xs.push_back({pad + sx * double(t), size_px - pad - sy * double(w.values[size_t(t)].first)});
        ys.push_back({pad + sx * double(t), size_px - pad - sy * double(w.values[size_t(t)].second)});
    }
    std::ostringstream os;
    os << header(size_px, size_px) << polyline(xs, "blue") << polyline(ys, "red") << "</svg>\n";
    return os.str();
}

std::string svg_coalescent(const CoalescentProcess& z, int size_px) {
    const int64_t n = z.n();
    int64_t vmin = 0, vmax = 1;
    for (int64_t t = z.lo(); t <= z.hi(); ++t)
        for (int64_t s = t; s <= z.hi(); ++s) {
            vmin = std::min<int64_t>(vmin, z.at(t, s));
            vmax = std::max<int64_t>(vmax, z.at(t, s));
        }
    const double pad = size_px * 0.03;
    const double sx = (size_px - 2 * pad) / double(std::max<int64_t>(1, n - 1));
    const double sy = (size_px - 2 * pad) / double(vmax - vmin);
    std::ostringstream os;
    os << header(size_px, size_px);
    for (int64_t t = z.lo(); t <= z.hi(); ++t) {
        std::vector<std::pair<double, double>> pts;
        for (int64_t s = t; s <= z.hi(); ++s)
            pts.push_back({pad + sx * double(s - z.lo()), size_px - pad - sy * double(z.at(t, s) - vmin)});
        os << polyline(pts, "green");
    }
    os << "</svg>\n";
    return os.str();
}

std::string svg_map(const BipolarOrientation& m, int size_px) {
    DownRightTree t = down_right_tree(m);
    const int nv = int(m.vertices.size());
    // y: height in T(m) of the vertex; x: mean exploration rank of incident
    // edges
    std::vector<double> vy(size_t(nv), 0.0), vx(size_t(nv), 0.0), cnt(size_t(nv), 0.0);
    for (int e = 0; e < m.n_edges(); ++e) {
        int b = m.edges[size_t(e)].bottom;
        vy[size_t(m.edges[size_t(e)].top)] = std::max(vy[size_t(m.edges[size_t(e)].top)], double(t.depth[size_t(e)] + 1));
        vy[size_t(b)] = std::max(vy[size_t(b)], double(t.depth[size_t(e)]));
        for (int v : {m.edges[size_t(e)].bottom, m.edges[size_t(e)].top}) {
            vx[size_t(v)] += t.rank[size_t(e)];
            cnt[size_t(v)] += 1.0;
        }
    }
    double ymax = 1.0;
    for (int v = 0; v < nv; ++v) {
        if (cnt[size_t(v)] > 0) vx[size_t(v)] /= cnt[size_t(v)];
        ymax = std::max(ymax, vy[size_t(v)]);
    }
    const double pad = size_px * 0.05;
    const double sx = (size_px - 2 * pad) / double(std::max(1, m.n_edges()));
    const double sy = (size_px - 2 * pad) / ymax;
    auto px = [&](int v) { return pad + sx * vx[size_t(v)]; };
    auto py = [&](int v) { return size_px - pad - sy * vy[size_t(v)]; };
    std::ostringstream os;
    os << header(size_px, size_px);
    for (int e = 0; e < m.n_edges(); ++e) {
        int b = m.edges[size_t(e)].bottom, tp = m.edges[size_t(e)].top;
        os << "<line x1=\"" << fmt(px(b)) << "\" y1=\"" << fmt(py(b)) << "\" x2=\"" << fmt(px(tp))
           << "\" y2=\"" << fmt(py(tp)) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }
    for (int v = 0; v < nv; ++v)
        os << "<circle cx=\"" << fmt(px(v)) << "\" cy=\"" << fmt(py(v))
           << "\" r=\"2.5\" fill=\"" << (v == m.source ? "red" : v == m.sink ? "blue" : "black")
           << "\"/>\n";
    os << "</svg>\n";
    return os.str();
}

std::string svg_permuton(const GridPermuton& g, int size_px) {
    const double cell = double(size_px) / g.k;
    double vmax = 0;
    for (double v : g.mass) vmax = std::max(vmax, v);
    std::ostringstream os;
    os << header(size_px, size_px);
    for (int i = 1; i <= g.k; ++i) {
        for (int j = 1; j <= g.k; ++j) {
            double v = g.at(i, j);
            if (v <= 0) continue;
            int shade = int(255.0 * (1.0 - v / vmax));
            os << "<rect x=\"" << fmt((i - 1) * cell) << "\" y=\"" << fmt(double(size_px) - j * cell)
               << "\" width=\"" << fmt(cell) << "\" height=\"" << fmt(cell) << "\" fill=\"rgb(" << shade
               << ',' << shade << ',' << shade << ")\"/>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace baxlab
