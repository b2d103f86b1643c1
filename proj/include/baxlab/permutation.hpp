#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "baxlab/error.hpp"

namespace baxlab {

// A permutation in one-line notation, 1-based: values[i-1] = sigma(i).
// The size-0 permutation is allowed and acts as the identity.
class Permutation {
  public:
    Permutation() = default;
    explicit Permutation(std::vector<int> one_line);

    // Identity of size n.
    static Permutation identity(int n);

    int size() const { return int(values_.size()); }
    int operator()(int i) const { return values_[size_t(i) - 1]; }  // 1-based
    const std::vector<int>& values() const { return values_; }

    bool operator==(const Permutation& o) const { return values_ == o.values_; }

  private:
    std::vector<int> values_;
};

// Standardization: the unique permutation in the same relative order as seq.
// Throws DuplicateValues when two entries are equal.
Permutation std_of(std::span<const double> seq);
Permutation std_of(std::span<const int> seq);

// Pattern of sigma induced by the index set I (1-based, strictly increasing).
Permutation pattern(const Permutation& sigma, std::span<const int> indices);

// The vincular Baxter test: sigma is Baxter iff there are no i < j < k with
// sigma(j+1) < sigma(i) < sigma(k) < sigma(j) or
// sigma(j)   < sigma(k) < sigma(i) < sigma(j+1),
// where all four indices i, j, j+1, k are valid. Definitional O(n^3) scan.
bool is_baxter(const Permutation& sigma);

Permutation inverse(const Permutation& sigma);

// Clockwise quarter-turn of the diagram: sigma*(j) = n+1 - sigma^{-1}(j).
Permutation rotate_star(const Permutation& sigma);

// Exact rational reduced to lowest terms.
struct Rational {
    int64_t num = 0;
    int64_t den = 1;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    double to_double() const { return double(num) / double(den); }
};
Rational make_rational(int64_t num, int64_t den);

// Proportion of the n-k+1 windows of k consecutive indices of sigma that
// induce the pattern pi.
Rational consecutive_occurrence_density(const Permutation& pi, const Permutation& sigma);

// All Baxter permutations of size n in lexicographic order, streamed through
// the callback. Guarded at n <= 9 (SizeTooLarge).
void enumerate_baxter(int n, const std::function<void(const Permutation&)>& yield);
std::vector<Permutation> enumerate_baxter(int n);

}  // namespace baxlab
