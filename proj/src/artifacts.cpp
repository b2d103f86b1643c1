#include "baxlab/artifacts.hpp"

#include <fstream>

namespace baxlab {

json to_json(const Permutation& p) {
    return json{{"schema", kSchemaVersion}, {"type", "permutation"}, {"values", p.values()}};
}

json to_json(const TandemWalk& w) {
    json vals = json::array();
    for (auto [x, y] : w.values) vals.push_back(json::array({x, y}));
    return json{{"schema", kSchemaVersion}, {"type", "tandem_walk"}, {"values", std::move(vals)}};
}

json to_json(const CoalescentProcess& z) {
    json rows = json::array();
    for (int64_t t = z.lo(); t <= z.hi(); ++t) {
        json row = json::array();
        for (int64_t s = t; s <= z.hi(); ++s) row.push_back(z.at(t, s));
        rows.push_back(std::move(row));
    }
    return json{{"schema", kSchemaVersion},
                {"type", "coalescent"},
                {"lo", z.lo()},
                {"n", z.n()},
                {"trajectories", std::move(rows)}};
}

json to_json(const PlantedForest& f) {
    return json{{"schema", kSchemaVersion},
                {"type", "coalescent_forest"},
                {"lo", f.lo},
                {"n", f.n},
                {"parent", f.parent},
                {"first_child", f.first_child},
                {"next_sibling", f.next_sibling},
                {"roots", f.roots},
                {"root_index", f.root_index}};
}

json to_json(const BipolarOrientation& m) {
    json edges = json::array();
    for (const auto& e : m.edges)
        edges.push_back(json{{"bottom", e.bottom}, {"top", e.top}, {"left", e.left_face}, {"right", e.right_face}});
    json verts = json::array();
    for (const auto& v : m.vertices) verts.push_back(json{{"in", v.in}, {"out", v.out}});
    json faces = json::array();
    for (const auto& f : m.faces) faces.push_back(json{{"left", f.left}, {"right", f.right}});
    return json{{"schema", kSchemaVersion}, {"type", "bipolar_map"},
                {"edges", std::move(edges)},  {"vertices", std::move(verts)},
                {"faces", std::move(faces)},  {"source", m.source},
                {"sink", m.sink},             {"left_boundary", m.left_boundary},
                {"right_boundary", m.right_boundary}};
}

json to_json(const GridPermuton& g) {
    json rows = json::array();
    for (int i = 1; i <= g.k; ++i) {
        json row = json::array();
        for (int j = 1; j <= g.k; ++j) row.push_back(g.at(i, j));
        rows.push_back(std::move(row));
    }
    return json{{"schema", kSchemaVersion}, {"type", "grid_permuton"}, {"k", g.k}, {"mass", std::move(rows)}};
}

namespace {

void expect_type(const json& j, const char* type) {
    if (!j.contains("type") || j["type"] != type)
        throw error(errc::io_error, std::string("expected artifact of type ") + type);
}

}  // namespace

Permutation permutation_from_json(const json& j) {
    expect_type(j, "permutation");
    return Permutation(j.at("values").get<std::vector<int>>());
}

TandemWalk tandem_from_json(const json& j) {
    expect_type(j, "tandem_walk");
    std::vector<std::pair<int64_t, int64_t>> vals;
    for (const auto& v : j.at("values")) vals.emplace_back(v.at(0).get<int64_t>(), v.at(1).get<int64_t>());
    return validate_tandem(std::move(vals));
}

BipolarOrientation map_from_json(const json& j) {
    expect_type(j, "bipolar_map");
    BipolarOrientation m;
    for (const auto& e : j.at("edges"))
        m.edges.push_back({e.at("bottom").get<int>(), e.at("top").get<int>(), e.at("left").get<int>(),
                           e.at("right").get<int>()});
    for (const auto& v : j.at("vertices"))
        m.vertices.push_back({v.at("in").get<std::vector<int>>(), v.at("out").get<std::vector<int>>()});
    for (const auto& f : j.at("faces"))
        m.faces.push_back({f.at("left").get<std::vector<int>>(), f.at("right").get<std::vector<int>>()});
    m.source = j.at("source").get<int>();
    m.sink = j.at("sink").get<int>();
    m.left_boundary = j.at("left_boundary").get<std::vector<int>>();
    m.right_boundary = j.at("right_boundary").get<std::vector<int>>();
    validate_bipolar(m);
    return m;
}

GridPermuton grid_from_json(const json& j) {
    expect_type(j, "grid_permuton");
    GridPermuton g;
    g.k = j.at("k").get<int>();
    g.mass.reserve(size_t(g.k) * size_t(g.k));
    for (const auto& row : j.at("mass"))
        for (const auto& v : row) g.mass.push_back(v.get<double>());
    validate_permuton(g);
    return g;
}

void save_artifact(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw error(errc::io_error, "cannot open for writing: " + path);
    out << j.dump(1, ' ') << '\n';
    if (!out) throw error(errc::io_error, "write failed: " + path);
}

json load_artifact(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::io_error, "cannot open: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw error(errc::io_error, std::string("bad JSON in ") + path + ": " + e.what());
    }
    if (!j.contains("schema") || j["schema"].get<int>() != kSchemaVersion)
        throw error(errc::io_error, "missing or unsupported schema version in " + path);
    return j;
}

}  // namespace baxlab
