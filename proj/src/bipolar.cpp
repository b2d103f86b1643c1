#include "baxlab/bipolar.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace baxlab {

bool MarkedBipolarOrientation::fully_explored() const {
    for (int64_t l : edge_label)
        if (l == kNoLabel) return false;
    return true;
}

namespace {

[[noreturn]] void fail(const std::string& what) {
    throw error(errc::bad_parameter, "map invariant: " + what);
}

void check_boundary_path(const BipolarOrientation& m, const std::vector<int>& bd, int face_sentinel) {
    if (bd.empty()) fail("empty outer boundary");
    if (m.edges[size_t(bd.front())].bottom != m.source) fail("boundary does not start at source");
    if (m.edges[size_t(bd.back())].top != m.sink) fail("boundary does not end at sink");
    for (size_t q = 0; q + 1 < bd.size(); ++q)
        if (m.edges[size_t(bd[q])].top != m.edges[size_t(bd[q + 1])].bottom) fail("boundary not a path");
    for (int e : bd) {
        int f = face_sentinel == kLeftOuter ? m.edges[size_t(e)].left_face : m.edges[size_t(e)].right_face;
        if (f != face_sentinel) fail("boundary edge has wrong outer face");
    }
}

}  // namespace

void validate_bipolar(const BipolarOrientation& m) {
    const int ne = int(m.edges.size());
    const int nv = int(m.vertices.size());
    if (ne < 1) fail("no edges");
    if (m.source < 0 || m.source >= nv || m.sink < 0 || m.sink >= nv) fail("bad poles");
    if (!m.vertices[size_t(m.source)].in.empty()) fail("source has incoming edges");
    if (!m.vertices[size_t(m.sink)].out.empty()) fail("sink has outgoing edges");

    std::vector<int> in_seen(size_t(ne), 0), out_seen(size_t(ne), 0);
    for (int v = 0; v < nv; ++v) {
        if (v != m.source && m.vertices[size_t(v)].in.empty()) fail("non-source vertex with no incoming");
        if (v != m.sink && m.vertices[size_t(v)].out.empty()) fail("non-sink vertex with no outgoing");
        for (int e : m.vertices[size_t(v)].in) {
            if (e < 0 || e >= ne || m.edges[size_t(e)].top != v) fail("in-list inconsistent");
            ++in_seen[size_t(e)];
        }
        for (int e : m.vertices[size_t(v)].out) {
            if (e < 0 || e >= ne || m.edges[size_t(e)].bottom != v) fail("out-list inconsistent");
            ++out_seen[size_t(e)];
        }
    }
    for (int e = 0; e < ne; ++e)
        if (in_seen[size_t(e)] != 1 || out_seen[size_t(e)] != 1) fail("edge not listed exactly once");

    // local rotation: adjacent incidences share the face between them
    for (int v = 0; v < nv; ++v) {
        const auto& in = m.vertices[size_t(v)].in;
        const auto& out = m.vertices[size_t(v)].out;
        for (size_t q = 0; q + 1 < in.size(); ++q)
            if (m.edges[size_t(in[q])].right_face != m.edges[size_t(in[q + 1])].left_face)
                fail("incoming fan face mismatch");
        for (size_t q = 0; q + 1 < out.size(); ++q)
            if (m.edges[size_t(out[q])].right_face != m.edges[size_t(out[q + 1])].left_face)
                fail("outgoing fan face mismatch");
        if (!in.empty() && !out.empty()) {
            if (m.edges[size_t(in.front())].left_face != m.edges[size_t(out.front())].left_face)
                fail("left corner face mismatch");
            if (m.edges[size_t(in.back())].right_face != m.edges[size_t(out.back())].right_face)
                fail("right corner face mismatch");
        }
    }

    const int nf = int(m.faces.size());
    for (int f = 0; f < nf; ++f) {
        const auto& fc = m.faces[size_t(f)];
        if (fc.left.empty() || fc.right.empty()) fail("inner face with empty boundary");
        for (size_t q = 0; q + 1 < fc.left.size(); ++q)
            if (m.edges[size_t(fc.left[q])].top != m.edges[size_t(fc.left[q + 1])].bottom)
                fail("face left boundary not a path");
        for (size_t q = 0; q + 1 < fc.right.size(); ++q)
            if (m.edges[size_t(fc.right[q])].top != m.edges[size_t(fc.right[q + 1])].bottom)
                fail("face right boundary not a path");
        if (m.edges[size_t(fc.left.front())].bottom != m.edges[size_t(fc.right.front())].bottom)
            fail("face boundaries disagree at the bottom");
        if (m.edges[size_t(fc.left.back())].top != m.edges[size_t(fc.right.back())].top)
            fail("face boundaries disagree at the top");
        for (int e : fc.left)
            if (m.edges[size_t(e)].right_face != f) fail("left boundary edge does not see face on its right");
        for (int e : fc.right)
            if (m.edges[size_t(e)].left_face != f) fail("right boundary edge does not see face on its left");
    }
    // every (edge, side) incidence appears in exactly one boundary list
    std::vector<int> left_count(size_t(ne), 0), right_count(size_t(ne), 0);
    for (const auto& fc : m.faces) {
        for (int e : fc.right) ++left_count[size_t(e)];  // face on the left of e
        for (int e : fc.left) ++right_count[size_t(e)];
    }
    for (int e : m.left_boundary) ++left_count[size_t(e)];
    for (int e : m.right_boundary) ++right_count[size_t(e)];
    for (int e = 0; e < ne; ++e)
        if (left_count[size_t(e)] != 1 || right_count[size_t(e)] != 1) fail("edge/face incidence mismatch");

    check_boundary_path(m, m.left_boundary, kLeftOuter);
    check_boundary_path(m, m.right_boundary, kRightOuter);

    // Euler formula with the outer face counted once
    if (nv - ne + (nf + 1) != 2) fail("Euler formula violated");
}

void validate_marked(const MarkedBipolarOrientation& m) {
    validate_bipolar(m.map);
    const int ne = m.map.n_edges();
    if (int64_t(m.edge_label.size()) != ne) fail("label table size mismatch");
    if (m.label_edge.empty()) fail("no labeled edges");
    for (size_t q = 0; q < m.label_edge.size(); ++q) {
        int e = m.label_edge[q];
        if (e < 0 || e >= ne || m.edge_label[size_t(e)] != m.lo + int64_t(q)) fail("label maps broken");
    }
    if (m.active != m.label_edge.back()) fail("active edge is not the last label");

    // unexplored edges sit below the labels on the left boundary or above the
    // active edge on the right boundary
    std::vector<char> allowed(size_t(ne), 0);
    bool above_active = false;
    for (int e : m.map.right_boundary) {
        if (above_active) allowed[size_t(e)] = 1;
        if (e == m.active) above_active = true;
    }
    if (!above_active) fail("active edge not on the right boundary");
    bool seen_label = false;
    for (int e : m.map.left_boundary) {
        if (!seen_label && !m.explored(e)) allowed[size_t(e)] = 1;
        if (m.explored(e)) seen_label = true;
    }
    for (int e = 0; e < ne; ++e)
        if (!m.explored(e) && !allowed[size_t(e)]) fail("unexplored edge in the explored region");

    // labeled edges trace a path: consecutive labels are linked either
    // vertically or across the face glued at the later label
    for (size_t q = 0; q + 1 < m.label_edge.size(); ++q) {
        int e = m.label_edge[q], e2 = m.label_edge[q + 1];
        bool vertical = m.map.edges[size_t(e)].top == m.map.edges[size_t(e2)].bottom;
        int f = m.map.edges[size_t(e2)].left_face;
        bool across = f >= 0 && m.map.faces[size_t(f)].right.front() == e2 &&
                      m.map.faces[size_t(f)].left.back() == e;
        if (!vertical && !across) fail("labels do not trace an interface path");
    }
}

MarkedBipolarOrientation theta(std::span<const Step> steps, int64_t lo) {
    for (const Step& s : steps)
        if (!step_in_a(s)) throw error(errc::bad_increment, "step outside A");

    MarkedBipolarOrientation M;
    M.lo = lo;
    auto& m = M.map;
    m.vertices.resize(2);
    m.edges.push_back({0, 1, kLeftOuter, kRightOuter});
    m.vertices[0].out = {0};
    m.vertices[1].in = {0};
    m.source = 0;
    m.sink = 1;
    M.active = 0;
    M.label_edge.push_back(0);
    M.edge_label.push_back(lo);

    std::deque<int> left_bd{0};
    std::vector<int> below, above;  // right-boundary edges, back() = nearest to active

    auto new_vertex = [&] {
        m.vertices.push_back({});
        return int(m.vertices.size()) - 1;
    };
    auto new_edge = [&](int b, int t, int lf, int rf) {
        m.edges.push_back({b, t, lf, rf});
        M.edge_label.push_back(MarkedBipolarOrientation::kNoLabel);
        return int(m.edges.size()) - 1;
    };

    for (size_t k = 0; k < steps.size(); ++k) {
        const Step s = steps[k];
        const int64_t label = lo + int64_t(k) + 1;
        if (s.dx == 1 && s.dy == -1) {
            int e;
            if (!above.empty()) {
                e = above.back();
                above.pop_back();
            } else {
                int w = new_vertex();
                e = new_edge(m.sink, w, kLeftOuter, kRightOuter);
                m.vertices[size_t(m.sink)].out.push_back(e);
                m.vertices[size_t(w)].in.push_back(e);
                m.sink = w;
                left_bd.push_back(e);
            }
            below.push_back(M.active);
            M.active = e;
        } else {
            const int i = -s.dx, j = s.dy;
            const int fid = int(m.faces.size());
            BipolarOrientation::Face f;

            // left side of the face: the active edge, then i edges downward,
            // creating fresh ones below the source when the boundary runs out
            std::vector<int> top_down{M.active};
            m.edges[size_t(M.active)].right_face = fid;
            int chain_bottom = m.edges[size_t(M.active)].bottom;
            for (int q = 0; q < i; ++q) {
                if (!below.empty()) {
                    int p = below.back();
                    below.pop_back();
                    if (m.edges[size_t(p)].top != chain_bottom) fail("right boundary chain broken");
                    m.edges[size_t(p)].right_face = fid;
                    top_down.push_back(p);
                    chain_bottom = m.edges[size_t(p)].bottom;
                } else {
                    if (chain_bottom != m.source) fail("boundary exhausted away from the source");
                    int u = new_vertex();
                    int nl = new_edge(u, chain_bottom, kLeftOuter, fid);
                    m.vertices[size_t(u)].out.push_back(nl);
                    m.vertices[size_t(chain_bottom)].in.push_back(nl);
                    left_bd.push_front(nl);
                    m.source = u;
                    top_down.push_back(nl);
                    chain_bottom = u;
                }
            }
            f.left.assign(top_down.rbegin(), top_down.rend());

            // right side: j+1 new edges from the face bottom up to the top of
            // the old active edge
            const int f_top = m.edges[size_t(M.active)].top;
            int prev = chain_bottom;
            for (int q = 0; q <= j; ++q) {
                int topv = (q == j) ? f_top : new_vertex();
                int e = new_edge(prev, topv, fid, kRightOuter);
                m.vertices[size_t(prev)].out.push_back(e);
                m.vertices[size_t(topv)].in.push_back(e);
                f.right.push_back(e);
                prev = topv;
            }
            for (int q = j; q >= 1; --q) above.push_back(f.right[size_t(q)]);
            M.active = f.right.front();
            m.faces.push_back(std::move(f));
        }
        M.label_edge.push_back(M.active);
        M.edge_label[size_t(M.active)] = label;
    }

    m.left_boundary.assign(left_bd.begin(), left_bd.end());
    m.right_boundary = below;
    m.right_boundary.push_back(M.active);
    m.right_boundary.insert(m.right_boundary.end(), above.rbegin(), above.rend());
    validate_marked(M);
    return M;
}

MarkedBipolarOrientation theta(const TandemWalk& w) {
    MarkedBipolarOrientation m = theta(w.steps(), 1);
    if (!m.fully_explored()) fail("tandem walk produced unexplored edges");
    return m;
}

MarkedBipolarOrientation theta(const LatticeWalk& w) { return theta(w.steps, w.lo); }

std::vector<Step> increments_of(const MarkedBipolarOrientation& m) {
    std::vector<Step> steps;
    steps.reserve(m.label_edge.size() - 1);
    for (size_t q = 1; q < m.label_edge.size(); ++q) {
        int e = m.label_edge[q];
        int f = m.map.edges[size_t(e)].left_face;
        if (f >= 0 && m.map.faces[size_t(f)].right.front() == e) {
            const auto& fc = m.map.faces[size_t(f)];
            steps.push_back(Step{-(int(fc.left.size()) - 1), int(fc.right.size()) - 1});
        } else {
            steps.push_back(Step{1, -1});
        }
    }
    return steps;
}

BipolarOrientation to_plain(const MarkedBipolarOrientation& m) {
    if (!m.fully_explored()) throw error(errc::bad_parameter, "map has unexplored edges");
    const int ne = m.map.n_edges();
    std::vector<int> new_id(size_t(ne), -1);
    for (size_t q = 0; q < m.label_edge.size(); ++q) new_id[size_t(m.label_edge[q])] = int(q);
    BipolarOrientation out;
    out.vertices = m.map.vertices;
    out.faces = m.map.faces;
    out.source = m.map.source;
    out.sink = m.map.sink;
    out.edges.resize(size_t(ne));
    for (int e = 0; e < ne; ++e) out.edges[size_t(new_id[size_t(e)])] = m.map.edges[size_t(e)];
    auto remap = [&](std::vector<int>& xs) {
        for (int& x : xs) x = new_id[size_t(x)];
    };
    for (auto& v : out.vertices) {
        remap(v.in);
        remap(v.out);
    }
    for (auto& f : out.faces) {
        remap(f.left);
        remap(f.right);
    }
    out.left_boundary = m.map.left_boundary;
    out.right_boundary = m.map.right_boundary;
    remap(out.left_boundary);
    remap(out.right_boundary);
    validate_bipolar(out);
    return out;
}

MarkedBipolarOrientation restrict_marked(const MarkedBipolarOrientation& m, int64_t j, int64_t k) {
    if (j < m.lo || k > m.hi() || j > k) throw error(errc::bad_interval, "label window outside map interval");
    std::vector<Step> steps = increments_of(m);
    std::vector<Step> sub(steps.begin() + (j - m.lo), steps.begin() + (k - m.lo));
    MarkedBipolarOrientation out = theta(sub, j);

    // consistency with the structural restriction: faces with explored edges
    // in [j,k] on both of their boundaries survive, everything else drops
    std::multiset<std::pair<int, int>> kept_degrees, out_degrees;
    auto in_window = [&](int e) {
        int64_t l = m.edge_label[size_t(e)];
        return l != MarkedBipolarOrientation::kNoLabel && l >= j && l <= k;
    };
    int64_t kept_extra_edges = 0;
    for (const auto& f : m.map.faces) {
        bool left_hit = std::any_of(f.left.begin(), f.left.end(), in_window);
        bool right_hit = std::any_of(f.right.begin(), f.right.end(), in_window);
        if (left_hit && right_hit) {
            kept_degrees.insert({int(f.left.size()), int(f.right.size())});
            for (int e : f.left)
                if (!in_window(e)) ++kept_extra_edges;
            for (int e : f.right)
                if (!in_window(e)) ++kept_extra_edges;
        }
    }
    for (const auto& f : out.map.faces) out_degrees.insert({int(f.left.size()), int(f.right.size())});
    if (kept_degrees != out_degrees)
        throw error(errc::bad_interval, "restriction face set disagrees with the submap rebuild");
    if (int64_t(out.map.n_edges()) != (k - j + 1) + kept_extra_edges)
        throw error(errc::bad_interval, "restriction edge count disagrees with the submap rebuild");
    return out;
}

DownRightTree down_right_tree(const BipolarOrientation& m) {
    const int ne = m.n_edges();
    DownRightTree t;
    t.parent.assign(size_t(ne), -1);
    for (int e = 0; e < ne; ++e) {
        int v = m.edges[size_t(e)].bottom;
        if (v != m.source) t.parent[size_t(e)] = m.vertices[size_t(v)].in.back();
    }
    t.order.reserve(size_t(ne));
    t.depth.assign(size_t(ne), 0);
    t.rank.assign(size_t(ne), 0);
    // preorder, children (= outgoing edges of the top vertex when this edge
    // is its rightmost incoming) visited left to right
    std::vector<int> stack(m.vertices[size_t(m.source)].out.rbegin(), m.vertices[size_t(m.source)].out.rend());
    while (!stack.empty()) {
        int e = stack.back();
        stack.pop_back();
        if (t.parent[size_t(e)] != -1) t.depth[size_t(e)] = t.depth[size_t(t.parent[size_t(e)])] + 1;
        t.rank[size_t(e)] = int(t.order.size()) + 1;
        t.order.push_back(e);
        int v = m.edges[size_t(e)].top;
        if (v != m.sink || !m.vertices[size_t(v)].in.empty()) {
            if (m.vertices[size_t(v)].in.back() == e) {
                const auto& kids = m.vertices[size_t(v)].out;
                for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
            }
        }
    }
    if (int(t.order.size()) != ne) fail("down-right tree does not span all edges");
    t.height_process.assign(size_t(ne) + 1, 0);
    for (int q = 0; q < ne; ++q) t.height_process[size_t(q) + 1] = t.depth[size_t(t.order[size_t(q)])] + 1;
    return t;
}

TandemWalk bow(const BipolarOrientation& m) {
    DownRightTree t = down_right_tree(m);
    const int ne = m.n_edges();
    // heights toward the sink: climb the leftmost-outgoing chain
    std::vector<int64_t> hsink(m.vertices.size(), -1);
    hsink[size_t(m.sink)] = 0;
    for (size_t v0 = 0; v0 < m.vertices.size(); ++v0) {
        if (hsink[v0] >= 0) continue;
        std::vector<int> chain;
        int v = int(v0);
        while (hsink[size_t(v)] < 0) {
            chain.push_back(v);
            v = m.edges[size_t(m.vertices[size_t(v)].out.front())].top;
        }
        int64_t h = hsink[size_t(v)];
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) hsink[size_t(*it)] = ++h;
    }
    std::vector<std::pair<int64_t, int64_t>> vals{size_t(ne)};
    for (int q = 0; q < ne; ++q) {
        int e = t.order[size_t(q)];
        vals[size_t(q)] = {t.depth[size_t(e)], hsink[size_t(m.edges[size_t(e)].top)]};
    }
    return validate_tandem(std::move(vals));
}

BipolarOrientation dual(const BipolarOrientation& m) {
    const int nf = int(m.faces.size());
    const int dual_source = nf, dual_sink = nf + 1;
    auto fid = [&](int face) {
        if (face == kRightOuter) return dual_source;
        if (face == kLeftOuter) return dual_sink;
        return face;
    };
    // dual faces correspond to the non-pole primal vertices
    std::vector<int> dface(m.vertices.size(), -3);
    {
        int next = 0;
        for (int v = 0; v < int(m.vertices.size()); ++v)
            if (v != m.source && v != m.sink) dface[size_t(v)] = next++;
    }

    BipolarOrientation d;
    d.vertices.resize(size_t(nf) + 2);
    d.faces.resize(m.vertices.size() - 2);
    d.source = dual_source;
    d.sink = dual_sink;
    d.edges.resize(m.edges.size());
    for (int e = 0; e < m.n_edges(); ++e) {
        const auto& pe = m.edges[size_t(e)];
        auto& de = d.edges[size_t(e)];
        de.bottom = fid(pe.right_face);
        de.top = fid(pe.left_face);
        de.left_face = pe.bottom == m.source ? kLeftOuter : dface[size_t(pe.bottom)];
        de.right_face = pe.top == m.sink ? kRightOuter : dface[size_t(pe.top)];
    }
    for (int f = 0; f < nf; ++f) {
        d.vertices[size_t(f)].out = m.faces[size_t(f)].left;
        d.vertices[size_t(f)].in = m.faces[size_t(f)].right;
    }
    d.vertices[size_t(dual_source)].out = m.right_boundary;
    d.vertices[size_t(dual_sink)].in = m.left_boundary;
    for (int v = 0; v < int(m.vertices.size()); ++v) {
        if (dface[size_t(v)] < 0) continue;
        auto& g = d.faces[size_t(dface[size_t(v)])];
        g.left.assign(m.vertices[size_t(v)].in.rbegin(), m.vertices[size_t(v)].in.rend());
        g.right.assign(m.vertices[size_t(v)].out.rbegin(), m.vertices[size_t(v)].out.rend());
    }
    d.left_boundary.assign(m.vertices[size_t(m.source)].out.rbegin(), m.vertices[size_t(m.source)].out.rend());
    d.right_boundary.assign(m.vertices[size_t(m.sink)].in.rbegin(), m.vertices[size_t(m.sink)].in.rend());
    validate_bipolar(d);
    return d;
}

BipolarOrientation reverse_orientation(const BipolarOrientation& m) {
    BipolarOrientation r = m;
    for (auto& e : r.edges) {
        std::swap(e.bottom, e.top);
        std::swap(e.left_face, e.right_face);
        if (e.left_face == kRightOuter) e.left_face = kLeftOuter;
        else if (e.left_face == kLeftOuter) fail("unexpected outer face");
        if (e.right_face == kLeftOuter) e.right_face = kRightOuter;
        else if (e.right_face == kRightOuter) fail("unexpected outer face");
    }
    for (auto& v : r.vertices) {
        std::swap(v.in, v.out);
        std::reverse(v.in.begin(), v.in.end());
        std::reverse(v.out.begin(), v.out.end());
    }
    for (auto& f : r.faces) {
        std::swap(f.left, f.right);
        std::reverse(f.left.begin(), f.left.end());
        std::reverse(f.right.begin(), f.right.end());
    }
    std::swap(r.source, r.sink);
    r.left_boundary.assign(m.right_boundary.rbegin(), m.right_boundary.rend());
    r.right_boundary.assign(m.left_boundary.rbegin(), m.left_boundary.rend());
    validate_bipolar(r);
    return r;
}

Permutation op(const BipolarOrientation& m) {
    DownRightTree tp = down_right_tree(m);
    DownRightTree td = down_right_tree(dual(m));
    std::vector<int> pi(size_t(m.n_edges()), 0);
    for (int e = 0; e < m.n_edges(); ++e) pi[size_t(tp.rank[size_t(e)]) - 1] = td.rank[size_t(e)];
    return Permutation(std::move(pi));
}

namespace {

// Fix the edge-face conventions of dual_forest: the edge at the top of the
// right boundary of face f is f's rightmost incoming dual edge, i.e. the
// T(m*)-parent of the duals of f's left-boundary edges.
int top_right_edge(const BipolarOrientation& m, int face) { return m.faces[size_t(face)].right.back(); }

}  // namespace

PlantedForest dual_forest(const MarkedBipolarOrientation& m) {
    const int64_t n = int64_t(m.label_edge.size());
    PlantedForest f;
    f.lo = m.lo;
    f.n = n;
    f.parent.assign(size_t(n), -1);
    f.first_child.assign(size_t(n), -1);
    f.next_sibling.assign(size_t(n), -1);

    std::vector<int64_t> right_pos(m.map.edges.size(), -1);
    for (size_t q = 0; q < m.map.right_boundary.size(); ++q)
        right_pos[size_t(m.map.right_boundary[q])] = int64_t(q);
    const int64_t active_pos = right_pos[size_t(m.active)];
    if (active_pos < 0) fail("active edge not on the right boundary");

    struct Root {
        int64_t index;
        int64_t tie;  // position on the parent face's left boundary
        int32_t offset;
    };
    std::vector<Root> roots;

    for (int64_t t = 0; t < n; ++t) {
        const int e = m.label_edge[size_t(t)];
        const int rf = m.map.edges[size_t(e)].right_face;
        if (rf == kRightOuter) {
            if (right_pos[size_t(e)] < 0 || right_pos[size_t(e)] > active_pos)
                fail("explored right-boundary edge above the active edge");
            roots.push_back({right_pos[size_t(e)] - active_pos, 0, int32_t(t)});
        } else {
            const int ebar = top_right_edge(m.map, rf);
            if (m.explored(ebar)) {
                f.parent[size_t(t)] = int32_t(m.edge_label[size_t(ebar)] - m.lo);
            } else {
                if (right_pos[size_t(ebar)] <= active_pos) fail("unexplored face top not above the active edge");
                int64_t tie = 0;
                for (int le : m.map.faces[size_t(rf)].left) {
                    if (le == e) break;
                    ++tie;
                }
                roots.push_back({right_pos[size_t(ebar)] - active_pos, tie, int32_t(t)});
            }
        }
    }

    // children of an explored edge: the explored edges on the left boundary
    // of the face it tops, in bottom-to-top order
    for (int64_t t = 0; t < n; ++t) {
        const int e = m.label_edge[size_t(t)];
        const int lf = m.map.edges[size_t(e)].left_face;
        if (lf < 0 || top_right_edge(m.map, lf) != e) continue;
        int32_t prev = -1;
        for (int le : m.map.faces[size_t(lf)].left) {
            if (!m.explored(le)) continue;
            int32_t ct = int32_t(m.edge_label[size_t(le)] - m.lo);
            if (prev == -1) f.first_child[size_t(t)] = ct;
            else f.next_sibling[size_t(prev)] = ct;
            prev = ct;
        }
    }

    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
        return a.index != b.index ? a.index < b.index : a.tie < b.tie;
    });
    for (const Root& r : roots) {
        f.roots.push_back(r.offset);
        f.root_index.push_back(r.index);
    }
    return f;
}

Permutation op_marked(const MarkedBipolarOrientation& m) { return cp_from_forest(dual_forest(m)); }

namespace {

void signature_core(std::ostringstream& os, const BipolarOrientation& m, const std::vector<int>& edge_order) {
    std::vector<int> vnum(m.vertices.size(), -1), fnum(m.faces.size(), -1), enum_(m.edges.size(), -1);
    int nv = 0, nf = 0;
    for (size_t q = 0; q < edge_order.size(); ++q) enum_[size_t(edge_order[q])] = int(q);
    auto visit_v = [&](int v) {
        if (vnum[size_t(v)] == -1) vnum[size_t(v)] = nv++;
        return vnum[size_t(v)];
    };
    auto visit_f = [&](int face) {
        if (face < 0) return face;
        if (fnum[size_t(face)] == -1) fnum[size_t(face)] = nf++;
        return fnum[size_t(face)];
    };
    for (int e : edge_order) {
        const auto& ed = m.edges[size_t(e)];
        os << 'e' << visit_v(ed.bottom) << ',' << visit_v(ed.top) << ',' << visit_f(ed.left_face) << ','
           << visit_f(ed.right_face) << ';';
    }
    std::vector<int> face_by_new(size_t(nf), -1);
    for (size_t q = 0; q < m.faces.size(); ++q)
        if (fnum[q] != -1) face_by_new[size_t(fnum[q])] = int(q);
    for (int q = 0; q < nf; ++q) {
        const auto& fc = m.faces[size_t(face_by_new[size_t(q)])];
        os << 'f';
        for (int e : fc.left) os << enum_[size_t(e)] << ',';
        os << '|';
        for (int e : fc.right) os << enum_[size_t(e)] << ',';
        os << ';';
    }
    std::vector<int> vert_by_new(size_t(nv), -1);
    for (size_t q = 0; q < m.vertices.size(); ++q)
        if (vnum[q] != -1) vert_by_new[size_t(vnum[q])] = int(q);
    for (int q = 0; q < nv; ++q) {
        const auto& v = m.vertices[size_t(vert_by_new[size_t(q)])];
        os << 'v';
        for (int e : v.in) os << enum_[size_t(e)] << ',';
        os << '|';
        for (int e : v.out) os << enum_[size_t(e)] << ',';
        os << ';';
    }
    os << "s" << vnum[size_t(m.source)] << ',' << vnum[size_t(m.sink)] << ';';
    os << "L";
    for (int e : m.left_boundary) os << enum_[size_t(e)] << ',';
    os << "R";
    for (int e : m.right_boundary) os << enum_[size_t(e)] << ',';
}

}  // namespace

std::string canonical_signature(const BipolarOrientation& m) {
    std::vector<int> order(m.edges.size());
    for (size_t q = 0; q < order.size(); ++q) order[q] = int(q);
    std::ostringstream os;
    signature_core(os, m, order);
    return os.str();
}

std::string canonical_signature(const MarkedBipolarOrientation& m) {
    std::vector<char> seen(m.map.edges.size(), 0);
    std::vector<int> order;
    auto add = [&](int e) {
        if (!seen[size_t(e)]) {
            seen[size_t(e)] = 1;
            order.push_back(e);
        }
    };
    for (int e : m.label_edge) add(e);
    for (int e : m.map.left_boundary) add(e);
    for (int e : m.map.right_boundary) add(e);
    if (order.size() != m.map.edges.size()) fail("edges outside labels and boundaries");
    std::ostringstream os;
    os << "lo" << 0 << ";n" << m.label_edge.size() << ';';  // interval shape only
    signature_core(os, m.map, order);
    return os.str();
}

}  // namespace baxlab
