#pragma once

#include <string>

#include "baxlab/bipolar.hpp"
#include "baxlab/coalescent.hpp"
#include "baxlab/permutation.hpp"
#include "baxlab/permuton.hpp"
#include "baxlab/walk.hpp"

namespace baxlab {

// Deterministic SVG emitters: identical input gives identical bytes.

// Diagram of a permutation: one dot per point (i, sigma(i)) in the unit
// square.
std::string svg_permutation(const Permutation& p, int size_px = 800);

// Both coordinates of a tandem walk against time.
std::string svg_walk(const TandemWalk& w, int size_px = 800);

// Fan of coalescent trajectories over time.
std::string svg_coalescent(const CoalescentProcess& z, int size_px = 800);

// Layered drawing: vertices at height given by the down-right tree, edges
// bottom to top. Best-effort layout.
std::string svg_map(const BipolarOrientation& m, int size_px = 800);

// Heatmap of a grid permuton.
std::string svg_permuton(const GridPermuton& g, int size_px = 800);

}  // namespace baxlab
