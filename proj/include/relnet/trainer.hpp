#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "relnet/adam.hpp"
#include "relnet/checkpoint.hpp"
#include "relnet/disentangle.hpp"
#include "relnet/mann.hpp"
#include "relnet/mlp.hpp"
#include "relnet/rn.hpp"
#include "relnet/scene.hpp"

namespace relnet {

// Raised for invalid configuration (bad keys, out-of-range values,
// inconsistent task/model combinations). The CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class TaskKind { adjacency, one_hot, entangled, unseen_gen, one_shot };
enum class ModelKind { rn, mlp, linear_rn };

TaskKind task_from_string(const std::string& s);
std::string to_string(TaskKind t);
ModelKind model_from_string(const std::string& s);
std::string to_string(ModelKind m);

struct TrainConfig {
    TaskKind task = TaskKind::adjacency;
    ModelKind model = ModelKind::rn;
    RelationMode relation = RelationMode::position;

    std::size_t class_count = 5;
    std::size_t unseen_count = 10;  // unseen_gen only
    std::size_t samples_per_class = 200;
    GeneratorParams gen_params;
    std::string dataset_path;  // when set, load instead of generating

    std::vector<std::size_t> hidden = {64, 64};
    std::size_t g_out = 32;
    std::vector<std::size_t> mlp_hidden;  // explicit widths; empty = param-match

    double learning_rate = 1e-4;
    std::size_t batch_size = 32;
    std::size_t iterations = 20000;
    double test_fraction = 0.05;
    std::size_t log_every = 100;
    // Frozen-parameter train-loss evaluation runs over at most this many
    // training samples (a fixed deterministic subset).
    std::size_t train_eval_cap = 512;
    std::uint64_t seed = 1;
    std::uint64_t b_seed = 7;  // entangling permutation (entangled task)

    // one_shot task
    std::string preproc = "rn";  // rn | mlp
    std::size_t episode_classes = 5;
    std::size_t episode_length = 50;
    std::size_t pool_size = 40;
    std::size_t eval_pool_size = 10;
    std::size_t eval_episodes = 20;
    std::size_t feature_width = 32;  // pre-processor output width
    std::size_t controller = 64;
    std::size_t memory_slots = 32;
    std::size_t memory_width = 20;
    std::size_t read_heads = 2;
    double gamma = 0.95;

    std::string metrics_path;     // empty = do not write
    std::string checkpoint_path;  // empty = do not write
};

// Flat key=value text, one pair per line, '#' comments. Unknown keys and
// malformed values raise ConfigError.
TrainConfig parse_config_file(const std::string& path);
void apply_config_entry(TrainConfig& cfg, const std::string& key, const std::string& value);
void validate_config(const TrainConfig& cfg);

struct MetricsRecord {
    std::size_t iteration = 0;
    double train_loss = 0.0;
    double test_loss = 0.0;
    double test_accuracy = 0.0;
    long long wall_ms = 0;
};

// Header: iteration,train_loss,test_loss,test_accuracy,wall_ms. Doubles are
// printed with shortest-round-trip precision so equal runs give equal bytes.
std::string metrics_to_csv(const std::vector<MetricsRecord>& records);
void metrics_write(const std::vector<MetricsRecord>& records, const std::string& path);

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

// Stratified per-class split; every class contributes round(n * fraction)
// (at least 1) test samples. Deterministic in rng.
SplitIndices split_dataset(const Dataset& ds, double test_fraction, RngStream& rng);

// A trained (or initialized) scene-classification model: the selected
// network plus everything needed to evaluate and serialize it.
struct SceneModel {
    ModelKind kind = ModelKind::rn;
    TargetMode target_mode = TargetMode::adjacency;
    RelationMode relation = RelationMode::position;
    RnSpec rn;
    MlpSpec mlp;    // kind == mlp
    Permutation b;  // entangling input permutation; empty when unused
    ParamSet params;
};

// out_dim is the target width (16/32 adjacency entries or class count).
SceneModel build_scene_model(const TrainConfig& cfg, std::size_t out_dim);

struct SceneModelCache {
    Matrix input;  // batch as fed to the model (after any entangling)
    Matrix disentangled;
    RnCache rn_cache;
    MlpCache mlp_cache;
};

// `batch` rows are flattened raw scenes; entangling by model.b (when
// present) happens inside.
Matrix scene_model_forward(const SceneModel& m, const Matrix& batch,
                           SceneModelCache* cache = nullptr);
void scene_model_backward(const SceneModel& m, const Matrix& grad_logits,
                          const SceneModelCache& cache, ParamSet& grads);

struct BatchEval {
    double loss = 0.0;
    double accuracy = 0.0;  // per-edge sign accuracy or argmax accuracy
};

// Frozen-parameter evaluation over the given sample indices.
BatchEval evaluate_scene_model(const SceneModel& m, const Dataset& ds,
                               const std::vector<std::size_t>& indices);

// Fresh samples from classes that must be disjoint from the training pool
// (checked; overlap raises ConfigError). Adjacency targets only.
BatchEval eval_unseen(const SceneModel& m, const std::vector<SceneClass>& train_classes,
                      const std::vector<SceneClass>& unseen_classes,
                      std::size_t samples_per_class, RelationMode relation,
                      const GeneratorParams& gen_params, std::uint64_t seed);

struct TrainResult {
    std::vector<MetricsRecord> history;
    SceneModel model;
    Dataset dataset;
    SplitIndices split;
    std::vector<SceneClass> unseen_classes;  // unseen_gen only
    BatchEval unseen;                        // unseen_gen only
    bool diverged = false;
};

TrainResult train_scene_classifier(const TrainConfig& cfg);

struct OneShotResult {
    std::vector<MetricsRecord> history;  // iteration = episode count
    std::vector<double> instance_curve;  // final accuracy by instance index
    std::vector<double> instance1_history;  // instance-1 accuracy per eval
    MannConfig config;
    ParamSet params;
    std::vector<SceneClass> train_pool;
    std::vector<SceneClass> eval_pool;
    bool diverged = false;
};

MannConfig mann_config_from(const TrainConfig& cfg);
OneShotResult train_one_shot(const TrainConfig& cfg);

// Held-out-class evaluation with frozen parameters: mean per-step loss,
// overall accuracy, and the accuracy-by-instance curve.
struct OneShotEval {
    double loss = 0.0;
    double accuracy = 0.0;
    std::vector<double> instance_curve;
};

OneShotEval evaluate_one_shot(const MannConfig& cfg, const ParamSet& params,
                              const std::vector<SceneClass>& pool,
                              std::size_t episode_count, std::size_t episode_length,
                              const GeneratorParams& gen_params, RngStream& rng);

struct UbAnalysis {
    double score = 0.0;
    UbBaseline baseline;
    Matrix block_mass;
};

// Requires the checkpointed model to contain the disentangle layer "U".
UbAnalysis run_ub_analysis(const ParamSet& params, const Permutation& b,
                           std::size_t baseline_trials = 200,
                           std::uint64_t baseline_seed = 99);

// Checkpoint round-trip for scene models. The config fields that shaped the
// network are stored in meta so the model can be rebuilt without the
// original config file.
Checkpoint scene_model_checkpoint(const SceneModel& m, const TrainConfig& cfg);
SceneModel scene_model_from_checkpoint(const Checkpoint& ck);

}  // namespace relnet
