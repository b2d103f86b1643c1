#include "baxlab/coalescent.hpp"

#include <algorithm>
#include <numeric>

namespace baxlab {

namespace {
constexpr int64_t kDenseCap = 20000;
}

CoalescentProcess::CoalescentProcess(int64_t lo, int64_t n) : lo_(lo), n_(n) {
    if (n < 1) throw error(errc::bad_parameter, "coalescent process needs a nonempty interval");
    if (n > kDenseCap)
        throw error(errc::size_too_large,
                    "dense trajectory storage capped at n = 20000; use the forest path");
    row_off_.resize(size_t(n));
    size_t off = 0;
    for (int64_t r = 0; r < n; ++r) {
        row_off_[size_t(r)] = off;
        off += size_t(n - r);
    }
    data_.assign(off, 0);
}

void CoalescentProcess::check_range(int64_t t, int64_t s) const {
    if (t < lo_ || s < t || s > hi()) throw error(errc::index_out_of_range, "trajectory index outside I");
}

CoalescentProcess wc(std::span<const Step> steps, int64_t lo) {
    for (const Step& s : steps)
        if (!step_in_a(s)) throw error(errc::bad_increment, "step outside A");
    const int64_t n = int64_t(steps.size()) + 1;
    CoalescentProcess z(lo, n);
    for (int64_t t = lo; t <= z.hi(); ++t) {
        int64_t v = 0;
        z.at_mut(t, t) = 0;
        for (int64_t s = t; s < z.hi(); ++s) {
            v = coal_step(v, steps[size_t(s - lo)]);
            z.at_mut(t, s + 1) = int32_t(v);
        }
    }
    return z;
}

CoalescentProcess wc(const TandemWalk& w) { return wc(w.steps(), 1); }
CoalescentProcess wc(const LatticeWalk& w) { return wc(w.steps, w.lo); }

bool leq_z(const CoalescentProcess& z, int64_t i, int64_t j) {
    if (i == j) return true;
    if (i < j) return z.at(i, j) < 0;
    return z.at(j, i) >= 0;
}

Permutation cp(const CoalescentProcess& z) {
    if (z.lo() != 1) throw error(errc::bad_parameter, "cp expects the interval [1, n]");
    const int64_t n = z.n();
    std::vector<int> sigma(size_t(n), 1);  // sigma(i) = #{j : j <=_Z i}
    for (int64_t i = 1; i <= n; ++i)
        for (int64_t j = i + 1; j <= n; ++j) {
            if (z.at(i, j) < 0) ++sigma[size_t(j) - 1];  // i <=_Z j
            else ++sigma[size_t(i) - 1];                 // j <=_Z i
        }
    std::vector<char> seen(size_t(n), 0);
    for (int v : sigma) {
        if (v < 1 || v > n || seen[size_t(v) - 1])
            throw error(errc::not_total_order, "inconsistent <=_Z comparisons");
        seen[size_t(v) - 1] = 1;
    }
    return Permutation(std::move(sigma));
}

int64_t local_time(const CoalescentProcess& z, int64_t i, int64_t j) {
    int64_t count = 0;
    for (int64_t k = i; k <= j; ++k)
        if (z.at(i, k) == 0) ++count;
    return count;
}

std::vector<int32_t> PlantedForest::exploration() const {
    std::vector<int32_t> order;
    order.reserve(size_t(n));
    std::vector<int32_t> pending;  // siblings to resume after a subtree
    for (int32_t root : roots) {
        int32_t cur = root;
        for (;;) {
            order.push_back(cur);
            if (first_child[size_t(cur)] != -1) {
                if (next_sibling[size_t(cur)] != -1) pending.push_back(next_sibling[size_t(cur)]);
                cur = first_child[size_t(cur)];
            } else if (next_sibling[size_t(cur)] != -1) {
                cur = next_sibling[size_t(cur)];
            } else if (!pending.empty()) {
                cur = pending.back();
                pending.pop_back();
            } else {
                break;
            }
        }
    }
    return order;
}

std::vector<int32_t> PlantedForest::depth() const {
    std::vector<int32_t> d(size_t(n), 0);
    for (int32_t e : exploration())
        if (parent[size_t(e)] != -1) d[size_t(e)] = d[size_t(parent[size_t(e)])] + 1;
    return d;
}

PlantedForest fortree_naive(const CoalescentProcess& z) {
    const int64_t lo = z.lo(), n = z.n(), hi = z.hi();
    PlantedForest f;
    f.lo = lo;
    f.n = n;
    f.parent.assign(size_t(n), -1);
    f.first_child.assign(size_t(n), -1);
    f.next_sibling.assign(size_t(n), -1);

    for (int64_t t = lo; t <= hi; ++t) {
        for (int64_t s = t + 1; s <= hi; ++s) {
            if (z.at(t, s) == 0) {
                f.parent[size_t(t - lo)] = int32_t(s - lo);
                break;  // first return to zero
            }
        }
    }
    auto less_z = [&](int32_t a, int32_t b) { return leq_z(z, lo + a, lo + b); };
    // children of each parent, ordered by <=_Z
    std::vector<std::vector<int32_t>> kids{size_t(n)};
    for (int64_t t = 0; t < n; ++t)
        if (f.parent[size_t(t)] != -1) kids[size_t(f.parent[size_t(t)])].push_back(int32_t(t));
    for (int64_t p = 0; p < n; ++p) {
        auto& ks = kids[size_t(p)];
        std::sort(ks.begin(), ks.end(), less_z);
        for (size_t q = 0; q < ks.size(); ++q)
            if (q + 1 < ks.size()) f.next_sibling[size_t(ks[q])] = ks[q + 1];
        if (!ks.empty()) f.first_child[size_t(p)] = ks[0];
    }
    for (int64_t t = 0; t < n; ++t)
        if (f.parent[size_t(t)] == -1) f.roots.push_back(int32_t(t));
    std::sort(f.roots.begin(), f.roots.end(), less_z);
    for (int32_t r : f.roots) f.root_index.push_back(z.at(lo + r, hi));
    return f;
}

PlantedForest fortree(const CoalescentProcess& z) { return fortree_naive(z); }

namespace {

// Bundle of parentless edges frozen in <=_Z order, as a chain through `link`.
struct Chain {
    int32_t head = -1;
    int32_t tail = -1;
    bool empty() const { return head == -1; }
};

struct ChainArena {
    std::vector<int32_t>& link;
    void append(Chain& a, const Chain& b) {
        if (b.empty()) return;
        if (a.empty()) { a = b; return; }
        link[size_t(a.tail)] = b.head;
        a.tail = b.tail;
    }
};

}  // namespace

PlantedForest fortree_linear(std::span<const Step> steps, int64_t lo) {
    for (const Step& s : steps)
        if (!step_in_a(s)) throw error(errc::bad_increment, "step outside A");
    const int64_t n = int64_t(steps.size()) + 1;
    PlantedForest f;
    f.lo = lo;
    f.n = n;
    f.parent.assign(size_t(n), -1);
    f.first_child.assign(size_t(n), -1);
    f.next_sibling.assign(size_t(n), -1);

    ChainArena arena{f.next_sibling};

    // Parentless-edge state: trajectories at value 0 hold only the newest
    // edge; negative values form a stack of chains (top = value -1, depth d
    // = value -d); positive values form a min-stack of (value - offset)
    // entries, newest insertions always at the current minimum.
    std::vector<Chain> neg;                            // bottom = most negative
    std::vector<std::pair<int64_t, Chain>> pos;        // back = smallest value
    int64_t pos_offset = 0;
    Chain active{0, 0};  // edge offsets; edge of time t has offset t - lo

    auto freeze_children = [&](int32_t e, Chain kids) {
        f.first_child[size_t(e)] = kids.head;
        for (int32_t c = kids.head; c != -1; c = f.next_sibling[size_t(c)]) f.parent[size_t(c)] = e;
    };

    for (int64_t k = 0; k + 1 < n; ++k) {
        const Step s = steps[size_t(k)];
        const int32_t e = int32_t(k + 1);  // new edge offset
        if (s.dx == 1 && s.dy == -1) {
            // every value drops by 1; the value-1 chain lands on 0 and
            // coalesces with the new edge
            pos_offset -= 1;
            Chain kids{};
            if (!pos.empty() && pos.back().first + pos_offset == 0) {
                kids = pos.back().second;
                pos.pop_back();
            }
            freeze_children(e, kids);
            neg.push_back(active);
            active = Chain{e, e};
        } else {
            const int64_t i = -s.dx, j = s.dy;
            // values in [-i,-1] jump to j together with the active chain;
            // deeper values rise by i, which the stack depth encodes for free
            Chain merged{};
            const int64_t take = std::min<int64_t>(i, int64_t(neg.size()));
            for (int64_t d = take; d >= 1; --d) {
                arena.append(merged, neg[neg.size() - size_t(d)]);
            }
            neg.resize(neg.size() - size_t(take));
            arena.append(merged, active);
            if (j == 0) {
                freeze_children(e, merged);
            } else {
                pos_offset += j;
                pos.emplace_back(j - pos_offset, merged);
                freeze_children(e, Chain{});
            }
            active = Chain{e, e};
        }
    }

    // Roots in increasing index order: negatives bottom-up, the active edge
    // at 0, then positives from the top of the min-stack upward.
    auto add_roots = [&](const Chain& c, int64_t index) {
        for (int32_t r = c.head; r != -1; r = f.next_sibling[size_t(r)]) {
            f.roots.push_back(r);
            f.root_index.push_back(index);
        }
    };
    std::vector<std::pair<int64_t, Chain>> ordered;
    for (size_t d = 0; d < neg.size(); ++d) ordered.emplace_back(int64_t(d) - int64_t(neg.size()), neg[d]);
    ordered.emplace_back(0, active);
    for (size_t q = pos.size(); q-- > 0;) ordered.emplace_back(pos[q].first + pos_offset, pos[q].second);
    for (auto& [idx, chain] : ordered) add_roots(chain, idx);

    // Root chains carry next_sibling links from their bundle life; clear them
    // so sibling links only ever mean "next child".
    for (int32_t r : f.roots) f.next_sibling[size_t(r)] = -1;
    return f;
}

PlantedForest fortree_linear(const TandemWalk& w) { return fortree_linear(w.steps(), 1); }

Permutation cp_from_forest(const PlantedForest& f) {
    if (f.lo != 1) throw error(errc::bad_parameter, "cp expects the interval [1, n]");
    std::vector<int> sigma(size_t(f.n));
    auto order = f.exploration();
    for (size_t pos = 0; pos < order.size(); ++pos) sigma[size_t(order[pos])] = int(pos) + 1;
    return Permutation(std::move(sigma));
}

Permutation cp_linear(const TandemWalk& w) { return cp_from_forest(fortree_linear(w)); }

std::pair<CoalescentProcess, CoalescentProcess> wpc(const TandemWalk& w) {
    return {wc(w), wc(reverse_swap(w))};
}

TandemWalk pcw(const CoalescentProcess& z, const CoalescentProcess& z_rev) {
    const int64_t n = z.n();
    if (z_rev.n() != n || z.lo() != 1 || z_rev.lo() != 1)
        throw error(errc::bad_parameter, "pcw expects a wpc pair on [1, n]");
    Permutation sigma = cp(z);
    Permutation sigma_inv = inverse(sigma);
    Permutation sigma_star = rotate_star(sigma);
    std::vector<std::pair<int64_t, int64_t>> vals{size_t(n)};
    for (int64_t i = 1; i <= n; ++i) {
        vals[size_t(i) - 1].first = local_time(z, sigma_inv(int(i)), n) - 1;
        vals[size_t(i) - 1].second = local_time(z_rev, sigma_star(int(i)), n) - 1;
    }
    if (auto bad = check_tandem(vals))
        throw error(errc::not_in_image, "pcw output is not a tandem walk (violation at index " +
                                            std::to_string(bad->index) + ")");
    return TandemWalk{std::move(vals)};
}

TandemWalk pcw_linear(const TandemWalk& w) {
    const int64_t n = w.size();
    PlantedForest f = fortree_linear(w);
    PlantedForest f_rev = fortree_linear(reverse_swap(w));
    Permutation sigma = cp_from_forest(f);
    Permutation sigma_inv = inverse(sigma);
    Permutation sigma_star = rotate_star(sigma);
    // L^{(i)}(n) - 1 equals the depth of edge i in its tree: each zero visit
    // after the start is one parent hop.
    std::vector<int32_t> d = f.depth();
    std::vector<int32_t> d_rev = f_rev.depth();
    std::vector<std::pair<int64_t, int64_t>> vals{size_t(n)};
    for (int64_t i = 1; i <= n; ++i) {
        vals[size_t(i) - 1].first = d[size_t(sigma_inv(int(i))) - 1];
        vals[size_t(i) - 1].second = d_rev[size_t(sigma_star(int(i))) - 1];
    }
    if (auto bad = check_tandem(vals))
        throw error(errc::not_in_image, "pcw output is not a tandem walk (violation at index " +
                                            std::to_string(bad->index) + ")");
    return TandemWalk{std::move(vals)};
}

TrajectoryLawReport trajectory_law_check(int k, uint64_t samples, Rng& rng) {
    if (k < 1) throw error(errc::bad_parameter, "need k >= 1");
    TrajectoryLawReport rep;
    rep.samples = samples;

    // Marginal bins: -1, 0, 1, ..., vmax, tail; expected counts below 10 are
    // pooled into the tail.
    const double total = double(samples) * k;
    int vmax = 0;
    while (total * std::ldexp(1.0, -(vmax + 1) - 2) >= 10.0 && vmax < 29) ++vmax;
    const int nbins = vmax + 3;  // -1, 0..vmax, tail
    auto bin_of = [&](int64_t d) {
        if (d == -1) return 0;
        if (d <= vmax) return int(d) + 1;
        return nbins - 1;
    };
    std::vector<double> obs(size_t(nbins), 0.0);

    // Pair bins for the independence check: {-1, 0, 1, 2, >=3}^2.
    auto coarse = [](int64_t d) {
        if (d == -1) return 0;
        if (d >= 3) return 4;
        return int(d) + 1;
    };
    std::vector<double> obs_pair(25, 0.0);

    for (uint64_t s = 0; s < samples; ++s) {
        int64_t z = 0;
        int prev_bin = -1;
        for (int t = 0; t < k; ++t) {
            int64_t z2 = coal_step(z, sample_step(rng));
            int64_t d = z2 - z;
            z = z2;
            obs[size_t(bin_of(d))] += 1.0;
            int cb = coarse(d);
            if (prev_bin >= 0) obs_pair[size_t(prev_bin * 5 + cb)] += 1.0;
            prev_bin = cb;
        }
    }

    auto pmass = [](int64_t d) {  // increment law of Ybar
        if (d == -1) return 0.5;
        if (d < 0) return 0.0;
        return std::ldexp(1.0, -int(d) - 2);
    };
    std::vector<double> expected(size_t(nbins), 0.0);
    expected[0] = 0.5 * total;
    double rest = 0.5;
    for (int v = 0; v <= vmax; ++v) {
        expected[size_t(v) + 1] = pmass(v) * total;
        rest -= pmass(v);
    }
    expected[size_t(nbins) - 1] = rest * total;
    rep.marginal = stats::chi2_test(obs, expected);

    double pc[5] = {0.5, 0.25, 0.125, 0.0625, 0.0625};  // coarse marginal masses
    const double pairs_total = double(samples) * (k - 1);
    std::vector<double> exp_pair(25, 0.0);
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) exp_pair[size_t(a * 5 + b)] = pc[a] * pc[b] * pairs_total;
    if (k >= 2) rep.pairs = stats::chi2_test(obs_pair, exp_pair);
    return rep;
}

int SignedTree::leaf_count() const {
    int k = 0;
    for (const auto& nd : nodes)
        if (nd.children.empty()) ++k;
    return k;
}

void SignedTree::validate() const {
    if (nodes.empty() || root < 0 || root >= int(nodes.size()))
        throw error(errc::malformed_tree, "empty tree or bad root");
    std::vector<char> seen(nodes.size(), 0);
    std::vector<int> stack{root};
    seen[size_t(root)] = 1;
    size_t visited = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        ++visited;
        for (int c : nodes[size_t(v)].children) {
            if (c < 0 || c >= int(nodes.size()) || seen[size_t(c)])
                throw error(errc::malformed_tree, "child index reused or out of range");
            seen[size_t(c)] = 1;
            stack.push_back(c);
        }
    }
    if (visited != nodes.size()) throw error(errc::malformed_tree, "unreachable nodes");
}

SignedTree random_signed_tree(int max_leaves, Rng& rng) {
    if (max_leaves < 1) throw error(errc::bad_parameter, "need max_leaves >= 1");
    // Grow by repeatedly expanding a random leaf into an internal vertex with
    // 2..4 children until the budget is reached.
    SignedTree t;
    t.nodes.push_back({});
    std::vector<int> leaves{0};
    int n_leaves = 1;
    while (n_leaves < max_leaves) {
        if (int(rng.below(4)) == 0 && n_leaves > 1) break;  // stop early sometimes
        int pick = int(rng.below(uint64_t(leaves.size())));
        int v = leaves[size_t(pick)];
        leaves.erase(leaves.begin() + pick);
        int arity = 2 + int(rng.below(3));
        arity = std::min(arity, max_leaves - n_leaves + 1);
        if (arity < 2) break;
        t.nodes[size_t(v)].sign = rng.coin() ? +1 : -1;
        for (int c = 0; c < arity; ++c) {
            t.nodes[size_t(v)].children.push_back(int(t.nodes.size()));
            leaves.push_back(int(t.nodes.size()));
            t.nodes.push_back({});
        }
        n_leaves += arity - 1;
    }
    t.validate();
    return t;
}

namespace {

void exploration_leaves(const SignedTree& t, int v, bool reverse_minus, std::vector<int>& out) {
    const auto& nd = t.nodes[size_t(v)];
    if (nd.children.empty()) {
        out.push_back(v);
        return;
    }
    if (reverse_minus && nd.sign < 0)
        for (size_t q = nd.children.size(); q-- > 0;) exploration_leaves(t, nd.children[q], reverse_minus, out);
    else
        for (int c : nd.children) exploration_leaves(t, c, reverse_minus, out);
}

}  // namespace

Permutation perm_of_signed_tree(const SignedTree& t) {
    t.validate();
    std::vector<int> order_plain, order_tilde;
    exploration_leaves(t, t.root, false, order_plain);
    exploration_leaves(t, t.root, true, order_tilde);
    const int k = int(order_plain.size());
    std::vector<int> pos_in_tilde(t.nodes.size(), 0);
    for (int q = 0; q < k; ++q) pos_in_tilde[size_t(order_tilde[size_t(q)])] = q + 1;
    std::vector<int> sigma(size_t(k), 0);
    for (int i = 0; i < k; ++i) sigma[size_t(i)] = pos_in_tilde[size_t(order_plain[size_t(i)])];
    return Permutation(std::move(sigma));
}

SeparableCoalescent separable_coalescent(const SignedTree& t) {
    t.validate();
    SeparableCoalescent out;
    if (t.nodes.size() == 1) {
        out.leaf_times = {0};
        out.trajectories = {{0}};
        out.order = Permutation::identity(1);
        return out;
    }

    // Contour function and the vertex visited at each contour time.
    std::vector<int> contour{0};
    std::vector<int> at_vertex{t.root};
    std::vector<std::pair<int, size_t>> stack{{t.root, 0}};  // (vertex, next child slot)
    while (!stack.empty()) {
        auto& [v, slot] = stack.back();
        if (slot < t.nodes[size_t(v)].children.size()) {
            int c = t.nodes[size_t(v)].children[slot];
            ++slot;
            contour.push_back(contour.back() + 1);
            at_vertex.push_back(c);
            stack.emplace_back(c, 0);
        } else {
            stack.pop_back();
            if (!stack.empty()) {
                contour.push_back(contour.back() - 1);
                at_vertex.push_back(stack.back().first);
            }
        }
    }
    const int len = int(contour.size());  // 2e + 1 positions, times 0..2e
    auto local_max = [&](int j) {
        return (j == 0 || contour[size_t(j)] > contour[size_t(j) - 1]) &&
               (j + 1 == len || contour[size_t(j)] > contour[size_t(j) + 1]);
    };
    auto local_min = [&](int j) {
        return j > 0 && j + 1 < len && contour[size_t(j)] < contour[size_t(j) - 1] &&
               contour[size_t(j)] < contour[size_t(j) + 1];
    };

    for (int j = 0; j < len; ++j)
        if (local_max(j)) out.leaf_times.push_back(j);

    // Five-case increment rule driven by the contour and the signs at its
    // local minima.
    for (int i : out.leaf_times) {
        std::vector<int> z{0};
        int v = 0;
        for (int j = i; j + 1 < len; ++j) {
            int dc = contour[size_t(j) + 1] - contour[size_t(j)];
            int dz;
            if (v > 0) dz = dc;
            else if (v < 0) dz = -dc;
            else if (local_min(j)) dz = t.nodes[size_t(at_vertex[size_t(j)])].sign > 0 ? -1 : +1;
            else dz = 0;
            v += dz;
            z.push_back(v);
        }
        out.trajectories.push_back(std::move(z));
    }

    const int k = int(out.leaf_times.size());
    std::vector<int> sigma(size_t(k), 1);
    for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
            int ta = out.leaf_times[size_t(a)], tb = out.leaf_times[size_t(b)];
            int z_ab = out.trajectories[size_t(a)][size_t(tb - ta)];
            if (z_ab < 0) ++sigma[size_t(b)];  // a <=_Z b
            else ++sigma[size_t(a)];
        }
    }
    out.order = Permutation(std::move(sigma));
    if (!(out.order == perm_of_signed_tree(t)))
        throw error(errc::malformed_tree, "coalescent ordering disagrees with perm(t)");
    return out;
}

}  // namespace baxlab
