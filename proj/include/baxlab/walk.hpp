#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "baxlab/error.hpp"
#include "baxlab/rng.hpp"

namespace baxlab {

// One increment from the step set A = {(+1,-1)} u {(-i,j) : i,j >= 0}.
struct Step {
    int dx = 0;
    int dy = 0;
    bool operator==(const Step&) const = default;
};

inline bool step_in_a(Step s) {
    if (s.dx == 1 && s.dy == -1) return true;
    return s.dx <= 0 && s.dy >= 0;
}

// nu mass of one step: 1/2 on (+1,-1), 2^{-i-j-3} on (-i,j).
double nu_mass(Step s);

// Walk with steps in A, stored pinned: value at the first index is (0,0).
// `lo` is the first time index (walks on [-h,h] keep lo = -h and are pinned
// at time 0 instead; see sample_window).
struct LatticeWalk {
    int64_t lo = 1;
    std::vector<Step> steps;

    int64_t points() const { return int64_t(steps.size()) + 1; }
    // Values relative to the pinned index (pin = index whose value is (0,0)).
    std::vector<std::pair<int64_t, int64_t>> values(int64_t pin_index) const;
};

// Tandem walk: values (X_t, Y_t), t = 1..n, in the non-negative quadrant,
// increments in A, X_1 = 0 and Y_n = 0.
struct TandemWalk {
    std::vector<std::pair<int64_t, int64_t>> values;

    int64_t size() const { return int64_t(values.size()); }
    Step step(int64_t t) const {  // increment from t to t+1, t in [1, n-1]
        auto [x0, y0] = values[size_t(t) - 1];
        auto [x1, y1] = values[size_t(t)];
        return Step{int(x1 - x0), int(y1 - y0)};
    }
    std::vector<Step> steps() const;
};

// First invariant violation of a would-be tandem walk, if any.
struct TandemViolation {
    errc code;
    int64_t index;  // 1-based offending position
};
std::optional<TandemViolation> check_tandem(std::span<const std::pair<int64_t, int64_t>> values);

// Throws on violation, with the report in the message.
TandemWalk validate_tandem(std::vector<std::pair<int64_t, int64_t>> values);

// Exact nu sampling: Bernoulli(1/2) for (+1,-1), else two independent
// Geometric(1/2) coordinates.
Step sample_step(Rng& rng);

// Closed-form mean and covariance of nu. The series is truncated where the
// 2^{-i-j-3} tail drops below 1e-15; `tail_bound` reports the discarded mass
// bound. Absolute error on the moments is below 1e-12.
struct NuMoments {
    double mean[2];
    double cov[2][2];
    double tail_bound;
};
NuMoments nu_moments();

struct UniformTandemResult {
    TandemWalk walk;
    int64_t realized_size = 0;
    uint64_t trials = 0;        // trials consumed in the accepting stream
    uint64_t stream = 0;        // accepting substream id (parallel sampler)
    uint64_t trial_in_stream = 0;
};

using ProgressFn = std::function<void(uint64_t trials_done)>;

// Rejection sampler for uniform tandem walks (the paper's algorithm): run a
// nu-walk from (0,0) until it first leaves the quadrant; accept when the last
// in-quadrant position is (0,0) and the in-quadrant point count m+2 gives a
// size m in [n, ceil((1+delta)n)]. The first and last steps are stripped.
// Output is exactly uniform on W_m conditionally on its realized size m.
UniformTandemResult sample_uniform_tandem(int64_t n, double delta, Rng& rng,
                                          const ProgressFn& progress = nullptr);

// Deterministic parallel version: trials are partitioned into fixed blocks of
// 2^20 trials, block b drawn from Rng::substream(seed, b); the accepted walk
// is the one with the smallest (block, trial) pair, so the result depends
// only on (n, delta, seed), not on the thread count.
UniformTandemResult sample_uniform_tandem_parallel(int64_t n, double delta, uint64_t seed,
                                                   int threads, const ProgressFn& progress = nullptr);

// Replay a recorded acceptance: re-runs substream `stream` up to
// `trial_in_stream` and returns that trial's walk (checked for acceptance).
UniformTandemResult replay_uniform_tandem(int64_t n, double delta, uint64_t seed, uint64_t stream,
                                          uint64_t trial_in_stream);

// All walks of W_n exactly once, lexicographic in the step sequence.
// Guarded at n <= 7.
void enumerate_tandem(int n, const std::function<void(const TandemWalk&)>& yield);
std::vector<TandemWalk> enumerate_tandem(int n);

// Time reversal plus coordinate swap: result_t = (Y_{n+1-t}, X_{n+1-t}).
TandemWalk reverse_swap(const TandemWalk& w);

// 2h independent nu steps around the pinned origin: a walk on [-h, h] with
// value (0,0) at time 0.
LatticeWalk sample_window(int64_t h, Rng& rng);

// Cheap generator of valid (non-uniform) tandem walks for identity tests:
// nu steps re-drawn whenever they would leave the quadrant, whole walk
// re-drawn until it ends on the x-axis. Supported on all of W_n.
TandemWalk sample_tandem_biased(int64_t n, Rng& rng);

// Pinned nu-walk on [1, n] (unconditioned; not confined to the quadrant).
LatticeWalk sample_nu_walk(int64_t n, Rng& rng);

}  // namespace baxlab
