#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "relnet/matrix.hpp"
#include "relnet/rng.hpp"

namespace relnet {

// Scene geometry: 4 object types, 4 instances each, 10 features per object.
// Feature layout per row: [x, y, r, g, b, size, onehot(type)_4].
inline constexpr std::size_t kTypeCount = 4;
inline constexpr std::size_t kInstancesPerType = 4;
inline constexpr std::size_t kObjectCount = kTypeCount * kInstancesPerType;
inline constexpr std::size_t kFeatureCount = 10;
inline constexpr std::size_t kFlatSize = kObjectCount * kFeatureCount;

// Directed graph over object types; edge (p, c) means type c inherits the
// relation feature from type p.
struct RelationGraph {
    std::size_t node_count = kTypeCount;
    std::vector<std::uint8_t> adj;  // row-major node_count^2, zero diagonal

    RelationGraph() : adj(kTypeCount * kTypeCount, 0) {}
    explicit RelationGraph(std::size_t k) : node_count(k), adj(k * k, 0) {}

    bool edge(std::size_t p, std::size_t c) const { return adj[p * node_count + c] != 0; }
    void set_edge(std::size_t p, std::size_t c, bool v) { adj[p * node_count + c] = v ? 1 : 0; }
    bool empty() const;
    std::vector<std::size_t> parents_of(std::size_t c) const;
    bool operator==(const RelationGraph& o) const { return node_count == o.node_count && adj == o.adj; }
};

bool is_acyclic(const RelationGraph& g);
// Deterministic topological order (Kahn, smallest index first). Throws on a cycle.
std::vector<std::size_t> topo_order(const RelationGraph& g);

// All acyclic zero-diagonal k x k binary matrices in lexicographic order of
// the row-major off-diagonal bit pattern. k <= 5.
std::vector<RelationGraph> enumerate_dags(std::size_t k);

struct SceneClass {
    std::size_t class_id = 0;
    RelationGraph position_graph;
    RelationGraph color_graph;
};

enum class RelationMode { position, color, both };

RelationMode relation_mode_from_string(const std::string& s);
std::string to_string(RelationMode m);

// Distinct (position, color) DAG pairs over 4 types, excluding the pair of
// two empty graphs, sampled without replacement.
std::vector<SceneClass> build_class_pool(std::size_t pool_size, RngStream& rng);

// Classes distinguished by a single relation: distinct non-empty DAGs on the
// active side, empty graph on the other (so the inactive feature is drawn
// i.i.d.). `mode` must not be `both`.
std::vector<SceneClass> build_single_relation_pool(std::size_t pool_size, RelationMode mode,
                                                   RngStream& rng);

struct GeneratorParams {
    double d0 = 0.06;       // minimum parent-child distance
    double sigma_d = 0.04;  // half-normal scale of the extra distance
    double sigma_c = 0.05;  // per-channel color inheritance noise
};

// Closed-form child placement: parent position plus polar offset.
std::array<double, 2> child_position(double px, double py, double theta_c, double d);

// Samples a 16x10 scene description from the class's generative model.
// Positions/colors follow the two graphs independently; coordinates and
// colors are clamped to [0, 1]. With clamp=false values may leave the unit
// range (used by distribution tests only).
Matrix generate_scene(const SceneClass& cls, const GeneratorParams& params,
                      RngStream& rng, bool clamp = true);

// Row-major flatten of the selected adjacency matrices; "both" is position
// followed by color (32 entries).
std::vector<double> adjacency_target(const SceneClass& cls, RelationMode mode);

// Fixed entangling permutation on flattened scenes: out[i] = in[perm[i]].
struct Permutation {
    std::vector<std::size_t> perm;

    std::size_t size() const { return perm.size(); }
    Permutation inverse() const;
    static Permutation identity(std::size_t n);
};

Permutation make_permutation(std::uint64_t seed, std::size_t n = kFlatSize);
std::vector<double> apply_permutation(const Permutation& p, const std::vector<double>& v);
std::vector<double> flatten_scene(const Matrix& scene);
std::vector<double> entangle(const Matrix& scene, const Permutation& b);

enum class TargetMode { adjacency, one_hot };

TargetMode target_mode_from_string(const std::string& s);
std::string to_string(TargetMode m);

struct Dataset {
    std::vector<SceneClass> classes;
    std::vector<std::pair<std::size_t, Matrix>> samples;  // (class index, scene)
    TargetMode target_mode = TargetMode::adjacency;
    RelationMode relation = RelationMode::position;
    GeneratorParams gen_params;
    std::uint64_t seed = 0;
};

// Equal per-class sample counts; per-sample generation uses split streams so
// the result depends only on (seed, class order).
Dataset make_dataset(std::vector<SceneClass> classes, std::size_t samples_per_class,
                     TargetMode target_mode, RelationMode relation,
                     const GeneratorParams& params, std::uint64_t seed);

// JSON-lines dataset file (header line + one line per sample).
void dataset_write(const Dataset& ds, const std::string& path);
Dataset dataset_read(const std::string& path);

// Width of the training target for a dataset.
std::size_t target_width(const Dataset& ds);
// Target row for one sample.
std::vector<double> sample_target(const Dataset& ds, std::size_t sample_index);

}  // namespace relnet
