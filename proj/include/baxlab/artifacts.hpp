#pragma once

#include <string>

#include <json.hpp>

#include "baxlab/bipolar.hpp"
#include "baxlab/coalescent.hpp"
#include "baxlab/permutation.hpp"
#include "baxlab/permuton.hpp"
#include "baxlab/walk.hpp"

namespace baxlab {

using nlohmann::json;

// Artifact files carry {"schema": 1, "type": ..., ...} plus an optional
// "config" block recording the generating command line.
inline constexpr int kSchemaVersion = 1;

json to_json(const Permutation& p);
json to_json(const TandemWalk& w);
json to_json(const CoalescentProcess& z);
json to_json(const PlantedForest& f);
json to_json(const BipolarOrientation& m);
json to_json(const GridPermuton& g);

Permutation permutation_from_json(const json& j);
TandemWalk tandem_from_json(const json& j);
BipolarOrientation map_from_json(const json& j);
GridPermuton grid_from_json(const json& j);

// Type dispatch on the "type" field happens at the call sites; these two do
// the file plumbing (IoError on failure) and schema check.
void save_artifact(const std::string& path, const json& j);
json load_artifact(const std::string& path);

}  // namespace baxlab
