#include "baxlab/walk.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace baxlab {

double nu_mass(Step s) {
    if (s.dx == 1 && s.dy == -1) return 0.5;
    if (!step_in_a(s)) return 0.0;
    return std::ldexp(1.0, int(s.dx + -s.dy - 3));  // 2^{-i-j-3}, i = -dx, j = dy
}

std::vector<std::pair<int64_t, int64_t>> LatticeWalk::values(int64_t pin_index) const {
    std::vector<std::pair<int64_t, int64_t>> out{size_t(points())};
    out[0] = {0, 0};
    for (size_t t = 1; t < out.size(); ++t)
        out[t] = {out[t - 1].first + steps[t - 1].dx, out[t - 1].second + steps[t - 1].dy};
    const size_t pin = size_t(pin_index - lo);
    if (pin >= out.size()) throw error(errc::index_out_of_range, "pin index outside walk interval");
    const auto [px, py] = out[pin];
    for (auto& v : out) v = {v.first - px, v.second - py};
    return out;
}

std::vector<Step> TandemWalk::steps() const {
    std::vector<Step> out;
    out.reserve(values.size() - 1);
    for (int64_t t = 1; t < size(); ++t) out.push_back(step(t));
    return out;
}

std::optional<TandemViolation> check_tandem(std::span<const std::pair<int64_t, int64_t>> v) {
    if (v.empty()) return TandemViolation{errc::bad_endpoints, 0};
    if (v.front().first != 0) return TandemViolation{errc::bad_endpoints, 1};
    if (v.back().second != 0) return TandemViolation{errc::bad_endpoints, int64_t(v.size())};
    for (size_t t = 0; t < v.size(); ++t) {
        if (v[t].first < 0 || v[t].second < 0) return TandemViolation{errc::left_quadrant, int64_t(t) + 1};
        if (t + 1 < v.size()) {
            Step s{int(v[t + 1].first - v[t].first), int(v[t + 1].second - v[t].second)};
            if (!step_in_a(s)) return TandemViolation{errc::bad_increment, int64_t(t) + 2};
        }
    }
    return std::nullopt;
}

TandemWalk validate_tandem(std::vector<std::pair<int64_t, int64_t>> values) {
    if (auto bad = check_tandem(values))
        throw error(bad->code, "tandem invariant fails at index " + std::to_string(bad->index));
    return TandemWalk{std::move(values)};
}

namespace {

// Upper end of the size window [n, ceil((1+delta) n)], guarded against the
// floating-point ceiling of values like 1.1 * 100 landing just above the
// intended integer.
int64_t window_upper(int64_t n, double delta) {
    return int64_t(std::ceil((1.0 + delta) * double(n) - 1e-9));
}

}  // namespace

Step sample_step(Rng& rng) {
    if (rng.coin()) return Step{1, -1};
    int i = rng.geometric_half();
    int j = rng.geometric_half();
    return Step{-i, j};
}

NuMoments nu_moments() {
    // The per-term mass drops below 1e-15 at i+j = 47 already, but the
    // second-moment terms carry an (i+j)^2 factor, so the cap sits higher to
    // keep the absolute error on the covariance below 1e-12.
    const int cap = 80;
    NuMoments m{};
    double mx = 0.5 * 1.0, my = 0.5 * -1.0;
    double mxx = 0.5, myy = 0.5, mxy = 0.5 * -1.0;
    double mass = 0.5;
    for (int i = 0; i <= cap; ++i) {
        for (int j = 0; i + j <= cap; ++j) {
            double p = std::ldexp(1.0, -i - j - 3);
            mass += p;
            mx += p * -i;
            my += p * j;
            mxx += p * double(i) * i;
            myy += p * double(j) * j;
            mxy += p * double(-i) * j;
        }
    }
    m.tail_bound = 1.0 - mass;
    m.mean[0] = mx;
    m.mean[1] = my;
    m.cov[0][0] = mxx - mx * mx;
    m.cov[1][1] = myy - my * my;
    m.cov[0][1] = m.cov[1][0] = mxy - mx * my;
    return m;
}

namespace {

// One rejection trial. Returns the realized tandem size m on acceptance
// (position buffer then holds the m+2 in-quadrant points), or -1.
inline int64_t run_trial(Rng& rng, int64_t upper, std::vector<std::pair<int64_t, int64_t>>& pos) {
    pos.clear();
    int64_t x = 0, y = 0;
    pos.emplace_back(0, 0);
    for (;;) {
        Step s = sample_step(rng);
        x += s.dx;
        y += s.dy;
        if (x < 0 || y < 0) break;
        if (int64_t(pos.size()) > upper + 2) {
            // Cannot be accepted any more; drain until exit without storing.
            do {
                Step d = sample_step(rng);
                x += d.dx;
                y += d.dy;
            } while (x >= 0 && y >= 0);
            return -1;
        }
        pos.emplace_back(x, y);
    }
    const int64_t m = int64_t(pos.size()) - 2;
    if (m >= 1 && pos.back() == std::pair<int64_t, int64_t>{0, 0}) return m;
    return -1;
}

TandemWalk strip_ends(std::vector<std::pair<int64_t, int64_t>>& pos) {
    std::vector<std::pair<int64_t, int64_t>> vals(pos.begin() + 1, pos.end() - 1);
    return validate_tandem(std::move(vals));
}

constexpr uint64_t kBlockTrials = 1ull << 20;

}  // namespace

UniformTandemResult sample_uniform_tandem(int64_t n, double delta, Rng& rng, const ProgressFn& progress) {
    if (n < 1 || delta < 0) throw error(errc::bad_parameter, "need n >= 1 and delta >= 0");
    const int64_t upper = window_upper(n, delta);
    std::vector<std::pair<int64_t, int64_t>> pos;
    pos.reserve(size_t(upper) + 3);
    uint64_t trials = 0;
    for (;;) {
        ++trials;
        int64_t m = run_trial(rng, upper, pos);
        if (m >= n && m <= upper) {
            UniformTandemResult r;
            r.walk = strip_ends(pos);
            r.realized_size = m;
            r.trials = trials;
            r.trial_in_stream = trials - 1;
            return r;
        }
        if (progress && (trials & ((1 << 22) - 1)) == 0) progress(trials);
    }
}

UniformTandemResult sample_uniform_tandem_parallel(int64_t n, double delta, uint64_t seed, int threads,
                                                   const ProgressFn& progress) {
    if (n < 1 || delta < 0) throw error(errc::bad_parameter, "need n >= 1 and delta >= 0");
    if (threads < 1) threads = 1;
    const int64_t upper = window_upper(n, delta);

    // Blocks are handed out in increasing order; each block is scanned by
    // exactly one worker, sequentially from trial 0. A worker abandons its
    // block only when a strictly smaller block has already accepted, so the
    // minimal accepting (block, trial) pair is found exactly and the result
    // depends only on (n, delta, seed).
    std::atomic<uint64_t> next_block{0};
    std::atomic<uint64_t> best_block{UINT64_MAX};
    std::atomic<uint64_t> trials_done{0};
    std::mutex mu;
    uint64_t best_trial = 0;
    std::vector<std::pair<int64_t, int64_t>> best_pos;

    auto worker = [&] {
        std::vector<std::pair<int64_t, int64_t>> pos;
        pos.reserve(size_t(upper) + 3);
        for (;;) {
            uint64_t b = next_block.fetch_add(1);
            if (b > best_block.load(std::memory_order_acquire)) return;
            Rng rng = Rng::substream(seed, b);
            for (uint64_t t = 0; t < kBlockTrials; ++t) {
                if ((t & 0xFFFF) == 0 && b > best_block.load(std::memory_order_relaxed)) break;
                int64_t m = run_trial(rng, upper, pos);
                if (m >= n && m <= upper) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (b < best_block.load()) {
                        best_block.store(b);
                        best_trial = t;
                        best_pos = pos;
                    }
                    break;  // nothing later in this block can beat (b, t)
                }
            }
            if (b > best_block.load(std::memory_order_acquire)) return;
            uint64_t done = trials_done.fetch_add(kBlockTrials) + kBlockTrials;
            if (progress) progress(done);
            if (best_block.load(std::memory_order_acquire) <= b) return;
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(size_t(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    UniformTandemResult r;
    r.walk = strip_ends(best_pos);
    r.realized_size = int64_t(best_pos.size()) - 2;
    r.stream = best_block.load();
    r.trial_in_stream = best_trial;
    r.trials = best_block.load() * kBlockTrials + best_trial + 1;
    return r;
}

UniformTandemResult replay_uniform_tandem(int64_t n, double delta, uint64_t seed, uint64_t stream,
                                          uint64_t trial_in_stream) {
    const int64_t upper = window_upper(n, delta);
    Rng rng = Rng::substream(seed, stream);
    std::vector<std::pair<int64_t, int64_t>> pos;
    pos.reserve(size_t(upper) + 3);
    for (uint64_t t = 0; t < trial_in_stream; ++t) run_trial(rng, upper, pos);
    int64_t m = run_trial(rng, upper, pos);
    if (m < n || m > upper)
        throw error(errc::not_in_image, "recorded trial does not accept; wrong (seed, stream, trial)");
    UniformTandemResult r;
    r.walk = strip_ends(pos);
    r.realized_size = m;
    r.stream = stream;
    r.trial_in_stream = trial_in_stream;
    r.trials = trial_in_stream + 1;
    return r;
}

namespace {

void enumerate_tandem_rec(int n, int t, int64_t x, int64_t y, std::vector<std::pair<int64_t, int64_t>>& pts,
                          const std::function<void(const TandemWalk&)>& yield) {
    if (t == n) {
        if (y == 0) yield(TandemWalk{pts});
        return;
    }
    // y must reach 0 with at most one unit drop per step: y' <= n - (t+1).
    const int64_t ybound = n - (t + 1);
    // (+1,-1)
    if (y - 1 >= 0) {
        pts.emplace_back(x + 1, y - 1);
        enumerate_tandem_rec(n, t + 1, x + 1, y - 1, pts, yield);
        pts.pop_back();
    }
    for (int64_t i = 0; i <= x; ++i) {
        for (int64_t j = 0; y + j <= ybound; ++j) {
            pts.emplace_back(x - i, y + j);
            enumerate_tandem_rec(n, t + 1, x - i, y + j, pts, yield);
            pts.pop_back();
        }
    }
}

}  // namespace

void enumerate_tandem(int n, const std::function<void(const TandemWalk&)>& yield) {
    if (n < 1 || n > 7) throw error(errc::size_too_large, "enumerate_tandem guarded at 1 <= n <= 7");
    std::vector<std::pair<int64_t, int64_t>> pts;
    for (int64_t h = 0; h <= n - 1; ++h) {
        pts.assign(1, {0, h});
        enumerate_tandem_rec(n, 1, 0, h, pts, yield);
    }
}

std::vector<TandemWalk> enumerate_tandem(int n) {
    std::vector<TandemWalk> out;
    enumerate_tandem(n, [&](const TandemWalk& w) { out.push_back(w); });
    return out;
}

TandemWalk reverse_swap(const TandemWalk& w) {
    std::vector<std::pair<int64_t, int64_t>> vals(size_t(w.size()));
    for (int64_t t = 1; t <= w.size(); ++t) {
        auto [x, y] = w.values[size_t(w.size() - t)];
        vals[size_t(t) - 1] = {y, x};
    }
    return validate_tandem(std::move(vals));
}

LatticeWalk sample_window(int64_t h, Rng& rng) {
    if (h < 0) throw error(errc::bad_parameter, "window radius must be >= 0");
    LatticeWalk w;
    w.lo = -h;
    w.steps.reserve(size_t(2 * h));
    for (int64_t t = 0; t < 2 * h; ++t) w.steps.push_back(sample_step(rng));
    return w;
}

TandemWalk sample_tandem_biased(int64_t n, Rng& rng) {
    if (n < 1) throw error(errc::bad_parameter, "need n >= 1");
    std::vector<std::pair<int64_t, int64_t>> vals{size_t(n)};
    for (;;) {
        int64_t h = std::min<int64_t>(rng.geometric_half(), n - 1);
        int64_t x = 0, y = h;
        vals[0] = {0, h};
        for (int64_t t = 1; t < n; ++t) {
            for (;;) {
                Step s = sample_step(rng);
                if (x + s.dx >= 0 && y + s.dy >= 0) {
                    x += s.dx;
                    y += s.dy;
                    break;
                }
            }
            vals[size_t(t)] = {x, y};
        }
        if (y == 0) return validate_tandem(std::move(vals));
    }
}

LatticeWalk sample_nu_walk(int64_t n, Rng& rng) {
    if (n < 1) throw error(errc::bad_parameter, "need n >= 1");
    LatticeWalk w;
    w.lo = 1;
    w.steps.reserve(size_t(n - 1));
    for (int64_t t = 0; t + 1 < n; ++t) w.steps.push_back(sample_step(rng));
    return w;
}

}  // namespace baxlab
