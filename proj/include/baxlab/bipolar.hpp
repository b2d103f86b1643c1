#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "baxlab/coalescent.hpp"
#include "baxlab/permutation.hpp"
#include "baxlab/walk.hpp"

namespace baxlab {

// Outer-face sentinels used wherever a face id is expected.
constexpr int kLeftOuter = -1;
constexpr int kRightOuter = -2;

// Plane bipolar orientation, edge-centric: explicit ordered incidence lists
// instead of a generic rotation system. Every constructor in this module
// re-validates the structural invariants (validate_bipolar).
struct BipolarOrientation {
    struct Edge {
        int bottom = -1, top = -1;
        int left_face = kLeftOuter, right_face = kRightOuter;
    };
    struct Vertex {
        std::vector<int> in;   // ordered left to right
        std::vector<int> out;  // ordered left to right
    };
    struct Face {
        std::vector<int> left;   // boundary edges bottom to top
        std::vector<int> right;  // boundary edges bottom to top
    };

    std::vector<Edge> edges;
    std::vector<Vertex> vertices;
    std::vector<Face> faces;  // inner faces
    int source = -1, sink = -1;
    std::vector<int> left_boundary;   // bottom to top
    std::vector<int> right_boundary;  // bottom to top

    int n_edges() const { return int(edges.size()); }
};

// Bipolar orientation with a labeled contiguous piece of interface path
// (labels lo..hi), an active edge, and possibly unexplored edges below the
// labels on the left boundary or above the active edge on the right one.
struct MarkedBipolarOrientation {
    BipolarOrientation map;
    int64_t lo = 1;
    std::vector<int> label_edge;    // label t -> edge id, t = lo..hi
    std::vector<int64_t> edge_label;  // edge id -> label, kNoLabel if unexplored
    int active = -1;

    static constexpr int64_t kNoLabel = INT64_MIN;
    int64_t hi() const { return lo + int64_t(label_edge.size()) - 1; }
    bool explored(int e) const { return edge_label[size_t(e)] != kNoLabel; }
    bool fully_explored() const;
};

// Structural validation; throws on violation with a description.
void validate_bipolar(const BipolarOrientation& m);
void validate_marked(const MarkedBipolarOrientation& m);

// The walk-to-map induction: one labeled edge for the one-point walk, then
// per increment either move the active edge up ((+1,-1)) or glue a face of
// left degree i+1 and right degree j+1 ((-i,j)).
MarkedBipolarOrientation theta(std::span<const Step> steps, int64_t lo = 1);
MarkedBipolarOrientation theta(const TandemWalk& w);
MarkedBipolarOrientation theta(const LatticeWalk& w);

// The increments a marked orientation was built from (inverse of theta).
std::vector<Step> increments_of(const MarkedBipolarOrientation& m);

// Plain bipolar orientation from a fully explored marked one, edges
// re-indexed into label order (edge id = label - lo).
BipolarOrientation to_plain(const MarkedBipolarOrientation& m);

// Submap generated by labels [j,k]: explored edges, faces with explored
// edges on both sides, and the other edges of those faces. Internally the
// submap is rebuilt from the recovered increments and the face/edge
// bookkeeping is asserted against the structural restriction.
MarkedBipolarOrientation restrict_marked(const MarkedBipolarOrientation& m, int64_t j, int64_t k);

// Down-right tree: keep only the rightmost incoming edge at every vertex.
struct DownRightTree {
    std::vector<int> parent;          // per edge; -1 at the source
    std::vector<int> order;           // exploration (clockwise contour) order
    std::vector<int> rank;            // per edge, 1-based position in order
    std::vector<int> depth;           // per edge; root edges have depth 0
    std::vector<int> height_process;  // (0, depth(e_1)+1, ..., depth(e_n)+1)
};
DownRightTree down_right_tree(const BipolarOrientation& m);

// Tandem walk of a plain bipolar orientation: X_t the height of the bottom
// vertex of e_t in T(m), Y_t the height of the top vertex in T(m**).
TandemWalk bow(const BipolarOrientation& m);

// Dual map: one vertex per face, edges oriented from the right face to the
// left face; dual edge ids equal primal edge ids.
BipolarOrientation dual(const BipolarOrientation& m);

// All edges reversed, poles and boundaries swapped (m**).
BipolarOrientation reverse_orientation(const BipolarOrientation& m);

// The Baxter permutation of the map: pairs the exploration rank of each edge
// in T(m) with the rank of its dual edge in T(m*).
Permutation op(const BipolarOrientation& m);

// Restriction of T(m*) to explored dual edges, planted by height relative to
// the active edge.
PlantedForest dual_forest(const MarkedBipolarOrientation& m);

// Permutation read from the dual forest exploration (marked analogue of op,
// equal to cp(wc(W)) for m = theta(W)).
Permutation op_marked(const MarkedBipolarOrientation& m);

// Canonical byte signature under the interface-path labeling; equal
// signatures mean equal labeled maps.
std::string canonical_signature(const BipolarOrientation& m);
std::string canonical_signature(const MarkedBipolarOrientation& m);

}  // namespace baxlab
