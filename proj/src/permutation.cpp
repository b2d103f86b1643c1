#include "baxlab/permutation.hpp"

#include <algorithm>
#include <numeric>

namespace baxlab {

Permutation::Permutation(std::vector<int> one_line) : values_(std::move(one_line)) {
    std::vector<char> seen(values_.size(), 0);
    for (int v : values_) {
        if (v < 1 || v > int(values_.size()) || seen[size_t(v) - 1])
            throw error(errc::duplicate_values, "not a permutation of 1..n");
        seen[size_t(v) - 1] = 1;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> v(size_t(n), 0);
    std::iota(v.begin(), v.end(), 1);
    return Permutation(std::move(v));
}

namespace {

template <class T>
Permutation std_impl(std::span<const T> seq) {
    const size_t n = seq.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return seq[size_t(a)] < seq[size_t(b)]; });
    std::vector<int> out(n);
    for (size_t r = 0; r < n; ++r) {
        if (r > 0 && !(seq[size_t(order[r - 1])] < seq[size_t(order[r])]))
            throw error(errc::duplicate_values, "std requires pairwise distinct entries");
        out[size_t(order[r])] = int(r) + 1;
    }
    return Permutation(std::move(out));
}

}  // namespace

Permutation std_of(std::span<const double> seq) { return std_impl(seq); }
Permutation std_of(std::span<const int> seq) { return std_impl(seq); }

Permutation pattern(const Permutation& sigma, std::span<const int> indices) {
    std::vector<int> sub;
    sub.reserve(indices.size());
    int prev = 0;
    for (int i : indices) {
        if (i < 1 || i > sigma.size()) throw error(errc::index_out_of_range, "pattern index outside [n]");
        if (i <= prev) throw error(errc::index_out_of_range, "pattern index set must be strictly increasing");
        prev = i;
        sub.push_back(sigma(i));
    }
    return std_of(std::span<const int>(sub));
}

bool is_baxter(const Permutation& sigma) {
    const int n = sigma.size();
    for (int j = 1; j + 1 <= n; ++j) {
        const int sj = sigma(j), sj1 = sigma(j + 1);
        for (int i = 1; i < j; ++i) {
            const int si = sigma(i);
            for (int k = j + 1; k <= n; ++k) {
                const int sk = sigma(k);
                if (sj1 < si && si < sk && sk < sj) return false;
                if (sj < sk && sk < si && si < sj1) return false;
            }
        }
    }
    return true;
}

Permutation inverse(const Permutation& sigma) {
    std::vector<int> inv(size_t(sigma.size()));
    for (int i = 1; i <= sigma.size(); ++i) inv[size_t(sigma(i)) - 1] = i;
    return Permutation(std::move(inv));
}

Permutation rotate_star(const Permutation& sigma) {
    const int n = sigma.size();
    Permutation inv = inverse(sigma);
    std::vector<int> out(size_t(n), 0);
    for (int j = 1; j <= n; ++j) out[size_t(j) - 1] = n + 1 - inv(j);
    return Permutation(std::move(out));
}

Rational make_rational(int64_t num, int64_t den) {
    if (den == 0) throw error(errc::bad_parameter, "rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g == 0) g = 1;
    return Rational{num / g, den / g};
}

Rational consecutive_occurrence_density(const Permutation& pi, const Permutation& sigma) {
    const int k = pi.size(), n = sigma.size();
    if (k < 1 || k > n) throw error(errc::pattern_larger_than_host, "need 1 <= |pi| <= |sigma|");
    int64_t count = 0;
    std::vector<int> window(size_t(k), 0);
    for (int i = 1; i + k - 1 <= n; ++i) {
        std::iota(window.begin(), window.end(), i);
        if (pattern(sigma, window) == pi) ++count;
    }
    return make_rational(count, n - k + 1);
}

void enumerate_baxter(int n, const std::function<void(const Permutation&)>& yield) {
    if (n < 0 || n > 9) throw error(errc::size_too_large, "enumerate_baxter guarded at n <= 9");
    if (n == 0) {
        yield(Permutation{});
        return;
    }
    std::vector<int> v(size_t(n), 0);
    std::iota(v.begin(), v.end(), 1);
    do {
        Permutation p(v);
        if (is_baxter(p)) yield(p);
    } while (std::next_permutation(v.begin(), v.end()));
}

std::vector<Permutation> enumerate_baxter(int n) {
    std::vector<Permutation> out;
    enumerate_baxter(n, [&](const Permutation& p) { out.push_back(p); });
    return out;
}

}  // namespace baxlab
