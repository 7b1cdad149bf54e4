#include "relnet/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace relnet {

bool RelationGraph::empty() const {
    return std::all_of(adj.begin(), adj.end(), [](std::uint8_t v) { return v == 0; });
}

std::vector<std::size_t> RelationGraph::parents_of(std::size_t c) const {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < node_count; ++p) {
        if (edge(p, c)) {
            out.push_back(p);
        }
    }
    return out;
}

bool is_acyclic(const RelationGraph& g) {
    // Kahn's algorithm; acyclic iff all nodes get removed.
    const std::size_t k = g.node_count;
    std::vector<std::size_t> indeg(k, 0);
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t c = 0; c < k; ++c) {
            if (g.edge(p, c)) {
                ++indeg[c];
            }
        }
    }
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < k; ++i) {
        if (indeg[i] == 0) {
            ready.push_back(i);
        }
    }
    std::size_t removed = 0;
    while (!ready.empty()) {
        const std::size_t n = ready.back();
        ready.pop_back();
        ++removed;
        for (std::size_t c = 0; c < k; ++c) {
            if (g.edge(n, c) && --indeg[c] == 0) {
                ready.push_back(c);
            }
        }
    }
    return removed == k;
}

std::vector<std::size_t> topo_order(const RelationGraph& g) {
    const std::size_t k = g.node_count;
    std::vector<std::size_t> indeg(k, 0);
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t c = 0; c < k; ++c) {
            if (g.edge(p, c)) {
                ++indeg[c];
            }
        }
    }
    std::vector<std::size_t> order;
    std::set<std::size_t> ready;
    for (std::size_t i = 0; i < k; ++i) {
        if (indeg[i] == 0) {
            ready.insert(i);
        }
    }
    while (!ready.empty()) {
        const std::size_t n = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(n);
        for (std::size_t c = 0; c < k; ++c) {
            if (g.edge(n, c) && --indeg[c] == 0) {
                ready.insert(c);
            }
        }
    }
    if (order.size() != k) {
        throw std::invalid_argument("topo_order: graph has a cycle");
    }
    return order;
}

std::vector<RelationGraph> enumerate_dags(std::size_t k) {
    if (k == 0 || k > 5) {
        throw std::invalid_argument("enumerate_dags: k must be in [1, 5]");
    }
    const std::size_t off_diag = k * (k - 1);
    std::vector<RelationGraph> out;
    for (std::uint64_t bits = 0; bits < (1ull << off_diag); ++bits) {
        RelationGraph g(k);
        std::size_t b = 0;
        for (std::size_t p = 0; p < k; ++p) {
            for (std::size_t c = 0; c < k; ++c) {
                if (p == c) {
                    continue;
                }
                // High bit first so the order is lexicographic in the
                // row-major off-diagonal pattern.
                if (bits & (1ull << (off_diag - 1 - b))) {
                    g.set_edge(p, c, true);
                }
                ++b;
            }
        }
        if (is_acyclic(g)) {
            out.push_back(std::move(g));
        }
    }
    std::sort(out.begin(), out.end(), [](const RelationGraph& a, const RelationGraph& b) {
        return a.adj < b.adj;
    });
    return out;
}

std::vector<SceneClass> build_class_pool(std::size_t pool_size, RngStream& rng) {
    static const std::vector<RelationGraph> dags = enumerate_dags(kTypeCount);
    const std::size_t n = dags.size();  // 543
    const std::size_t capacity = n * n - 1;
    if (pool_size > capacity) {
        throw std::invalid_argument("build_class_pool: pool_size " + std::to_string(pool_size) +
                                    " exceeds distinct-pair capacity " + std::to_string(capacity));
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<SceneClass> pool;
    pool.reserve(pool_size);
    while (pool.size() < pool_size) {
        const std::size_t pi = rng.uniform_index(n);
        const std::size_t ci = rng.uniform_index(n);
        if (pi == 0 && ci == 0) {
            continue;  // both graphs empty
        }
        if (!seen.insert({pi, ci}).second) {
            continue;
        }
        SceneClass cls;
        cls.class_id = pool.size();
        cls.position_graph = dags[pi];
        cls.color_graph = dags[ci];
        pool.push_back(std::move(cls));
    }
    return pool;
}

std::vector<SceneClass> build_single_relation_pool(std::size_t pool_size, RelationMode mode,
                                                   RngStream& rng) {
    if (mode == RelationMode::both) {
        throw std::invalid_argument("build_single_relation_pool: mode must be a single relation");
    }
    static const std::vector<RelationGraph> dags = enumerate_dags(kTypeCount);
    const std::size_t capacity = dags.size() - 1;  // excludes the empty graph
    if (pool_size > capacity) {
        throw std::invalid_argument("build_single_relation_pool: pool_size " +
                                    std::to_string(pool_size) + " exceeds capacity " +
                                    std::to_string(capacity));
    }
    std::set<std::size_t> seen;
    std::vector<SceneClass> pool;
    while (pool.size() < pool_size) {
        const std::size_t gi = rng.uniform_index(dags.size());
        if (gi == 0 || !seen.insert(gi).second) {
            continue;
        }
        SceneClass cls;
        cls.class_id = pool.size();
        if (mode == RelationMode::position) {
            cls.position_graph = dags[gi];
        } else {
            cls.color_graph = dags[gi];
        }
        pool.push_back(std::move(cls));
    }
    return pool;
}

std::array<double, 2> child_position(double px, double py, double theta_c, double d) {
    return {px + d * std::cos(theta_c), py + d * std::sin(theta_c)};
}

namespace {

double clamp01(double v, bool clamp) {
    return clamp ? std::clamp(v, 0.0, 1.0) : v;
}

}  // namespace

Matrix generate_scene(const SceneClass& cls, const GeneratorParams& params,
                      RngStream& rng, bool clamp) {
    if (!is_acyclic(cls.position_graph) || !is_acyclic(cls.color_graph)) {
        throw std::invalid_argument("generate_scene: class graphs must be acyclic");
    }
    constexpr double pi = std::numbers::pi;

    // Per-instance position state, indexed [type][instance].
    double x[kTypeCount][kInstancesPerType];
    double y[kTypeCount][kInstancesPerType];
    double theta[kTypeCount][kInstancesPerType];
    double col[kTypeCount][kInstancesPerType][3];

    for (std::size_t t : topo_order(cls.position_graph)) {
        const auto parents = cls.position_graph.parents_of(t);
        for (std::size_t i = 0; i < kInstancesPerType; ++i) {
            if (parents.empty()) {
                x[t][i] = rng.uniform();
                y[t][i] = rng.uniform();
                theta[t][i] = rng.uniform(0.0, 2.0 * pi);
            } else {
                const std::size_t pt = parents.size() == 1
                                           ? parents[0]
                                           : parents[rng.uniform_index(parents.size())];
                const std::size_t pinst = rng.uniform_index(kInstancesPerType);
                const double tp = theta[pt][pinst];
                const double tc = rng.uniform(tp - pi / 3.0, tp + pi / 3.0);
                const double d = params.d0 + rng.half_normal(params.sigma_d);
                const auto pos = child_position(x[pt][pinst], y[pt][pinst], tc, d);
                x[t][i] = clamp01(pos[0], clamp);
                y[t][i] = clamp01(pos[1], clamp);
                theta[t][i] = tc;
            }
        }
    }

    for (std::size_t t : topo_order(cls.color_graph)) {
        const auto parents = cls.color_graph.parents_of(t);
        for (std::size_t i = 0; i < kInstancesPerType; ++i) {
            if (parents.empty()) {
                for (int ch = 0; ch < 3; ++ch) {
                    col[t][i][ch] = rng.uniform();
                }
            } else {
                const std::size_t pt = parents.size() == 1
                                           ? parents[0]
                                           : parents[rng.uniform_index(parents.size())];
                const std::size_t pinst = rng.uniform_index(kInstancesPerType);
                for (int ch = 0; ch < 3; ++ch) {
                    col[t][i][ch] = clamp01(col[pt][pinst][ch] + rng.gaussian(params.sigma_c),
                                            clamp);
                }
            }
        }
    }

    Matrix scene(kObjectCount, kFeatureCount);
    for (std::size_t t = 0; t < kTypeCount; ++t) {
        for (std::size_t i = 0; i < kInstancesPerType; ++i) {
            const std::size_t row = t * kInstancesPerType + i;
            scene(row, 0) = x[t][i];
            scene(row, 1) = y[t][i];
            scene(row, 2) = col[t][i][0];
            scene(row, 3) = col[t][i][1];
            scene(row, 4) = col[t][i][2];
            scene(row, 5) = 0.2 + 0.1 * static_cast<double>(t);
            scene(row, 6 + t) = 1.0;
        }
    }
    return scene;
}

RelationMode relation_mode_from_string(const std::string& s) {
    if (s == "position") return RelationMode::position;
    if (s == "color") return RelationMode::color;
    if (s == "both") return RelationMode::both;
    throw std::invalid_argument("unknown relation mode: " + s);
}

std::string to_string(RelationMode m) {
    switch (m) {
        case RelationMode::position: return "position";
        case RelationMode::color: return "color";
        case RelationMode::both: return "both";
    }
    return "?";
}

TargetMode target_mode_from_string(const std::string& s) {
    if (s == "adjacency") return TargetMode::adjacency;
    if (s == "one_hot") return TargetMode::one_hot;
    throw std::invalid_argument("unknown target mode: " + s);
}

std::string to_string(TargetMode m) {
    return m == TargetMode::adjacency ? "adjacency" : "one_hot";
}

std::vector<double> adjacency_target(const SceneClass& cls, RelationMode mode) {
    std::vector<double> out;
    auto append = [&out](const RelationGraph& g) {
        for (std::uint8_t v : g.adj) {
            out.push_back(static_cast<double>(v));
        }
    };
    if (mode == RelationMode::position || mode == RelationMode::both) {
        append(cls.position_graph);
    }
    if (mode == RelationMode::color || mode == RelationMode::both) {
        append(cls.color_graph);
    }
    return out;
}

Permutation Permutation::identity(std::size_t n) {
    Permutation p;
    p.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.perm[i] = i;
    }
    return p;
}

Permutation Permutation::inverse() const {
    Permutation inv;
    inv.perm.resize(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        inv.perm[perm[i]] = i;
    }
    return inv;
}

Permutation make_permutation(std::uint64_t seed, std::size_t n) {
    Permutation p = Permutation::identity(n);
    RngStream rng(seed, /*stream_id=*/0x7065726d);  // dedicated stream tag
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.uniform_index(i);
        std::swap(p.perm[i - 1], p.perm[j]);
    }
    return p;
}

std::vector<double> apply_permutation(const Permutation& p, const std::vector<double>& v) {
    if (v.size() != p.size()) {
        throw std::invalid_argument("apply_permutation: length mismatch " +
                                    std::to_string(v.size()) + " vs " +
                                    std::to_string(p.size()));
    }
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = v[p.perm[i]];
    }
    return out;
}

std::vector<double> flatten_scene(const Matrix& scene) {
    return scene.values();
}

std::vector<double> entangle(const Matrix& scene, const Permutation& b) {
    return apply_permutation(b, flatten_scene(scene));
}

Dataset make_dataset(std::vector<SceneClass> classes, std::size_t samples_per_class,
                     TargetMode target_mode, RelationMode relation,
                     const GeneratorParams& params, std::uint64_t seed) {
    Dataset ds;
    ds.classes = std::move(classes);
    ds.target_mode = target_mode;
    ds.relation = relation;
    ds.gen_params = params;
    ds.seed = seed;
    RngStream root(seed, 1);
    for (std::size_t c = 0; c < ds.classes.size(); ++c) {
        for (std::size_t s = 0; s < samples_per_class; ++s) {
            RngStream stream = root.split(c * samples_per_class + s);
            ds.samples.emplace_back(c, generate_scene(ds.classes[c], params, stream));
        }
    }
    return ds;
}

std::size_t target_width(const Dataset& ds) {
    if (ds.target_mode == TargetMode::one_hot) {
        return ds.classes.size();
    }
    std::size_t w = kTypeCount * kTypeCount;
    return ds.relation == RelationMode::both ? 2 * w : w;
}

std::vector<double> sample_target(const Dataset& ds, std::size_t sample_index) {
    const std::size_t ci = ds.samples.at(sample_index).first;
    if (ds.target_mode == TargetMode::adjacency) {
        return adjacency_target(ds.classes[ci], ds.relation);
    }
    std::vector<double> t(ds.classes.size(), 0.0);
    t[ci] = 1.0;
    return t;
}

}  // namespace relnet
