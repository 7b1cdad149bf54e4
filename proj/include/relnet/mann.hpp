#pragma once

#include <string>
#include <vector>

#include "relnet/lstm.hpp"
#include "relnet/memory.hpp"
#include "relnet/mlp.hpp"
#include "relnet/rn.hpp"
#include "relnet/scene.hpp"

namespace relnet {

// One step of a labeled episode. input_label is the previous step's target
// (zero vector at step 0); class_instance_index counts occurrences of the
// step's class within the episode, starting at 1.
struct EpisodeStep {
    Matrix scene;                      // 16 x 10
    std::vector<double> input_label;   // label_count wide
    std::vector<double> target_label;  // one-hot, label_count wide
    std::size_t class_instance_index = 0;
    std::size_t class_index = 0;       // index into the episode's class draw
};

struct Episode {
    std::vector<EpisodeStep> steps;
    std::size_t label_count = 5;
};

// Draws class_count classes from the pool without replacement, assigns them
// an episode-local random label bijection and samples `length` fresh scenes.
Episode build_episode(const std::vector<SceneClass>& pool, std::size_t class_count,
                      std::size_t length, const GeneratorParams& gen_params,
                      RngStream& rng);

// Debug dump, JSON-lines with one step per line.
void episode_dump(const Episode& ep, const std::string& path);

enum class PreprocKind { rn, mlp };

struct MannConfig {
    PreprocKind preproc = PreprocKind::rn;
    RnSpec rn;       // used when preproc == rn; f output = feature width
    MlpSpec mlp;     // used when preproc == mlp; output = feature width
    std::size_t feature_width = 160;
    std::size_t label_count = 5;
    LstmSpec controller;  // input filled in by mann_init
    MemoryConfig memory;

    std::size_t controller_input() const {
        return feature_width + label_count + memory.heads * memory.width;
    }
};

// Desk-scale defaults: small controller/memory, RN pre-processor.
MannConfig make_mann_config(PreprocKind preproc, std::size_t feature_width,
                            std::size_t label_count, std::size_t controller_size,
                            const MemoryConfig& memory,
                            std::vector<std::size_t> pre_hidden, std::size_t g_out);

ParamSet mann_init(MannConfig& cfg, RngStream& rng);

struct MannStepOutput {
    Matrix logits;  // 1 x label_count
};

struct MannForwardResult {
    double loss = 0.0;  // softmax cross entropy summed over steps
    std::vector<Matrix> logits;              // per step
    std::vector<std::size_t> predictions;    // argmax per step
    MemoryState final_memory;
};

struct MannEpisodeCache;

// Runs an episode through preprocessor -> controller -> memory -> readout.
// Memory state threads through the steps; pass a cache to enable backward.
// An initial state can be supplied to resume mid-episode.
MannForwardResult mann_episode_forward(const Episode& ep, const MannConfig& cfg,
                                       const ParamSet& params,
                                       MannEpisodeCache* cache = nullptr,
                                       const MemoryState* initial = nullptr,
                                       const LstmState* initial_lstm = nullptr);

// Full backpropagation through time; returns parameter gradients.
ParamSet mann_episode_backward(const Episode& ep, const MannConfig& cfg,
                               const ParamSet& params, const MannEpisodeCache& cache);

// Loss and gradients in one call (the training-loop surface).
std::pair<double, ParamSet> mann_episode_loss_grads(const Episode& ep, const MannConfig& cfg,
                                                    const ParamSet& params);

// Accuracy conditioned on the within-episode instance index k = 1..max_k.
// predictions[e][t] is the predicted label for episode e step t.
std::vector<double> instance_accuracy(const std::vector<std::vector<std::size_t>>& predictions,
                                      const std::vector<Episode>& episodes,
                                      std::size_t max_k);

// Reference predictor: repeats the label revealed for a class's first
// instance, chance on first sight. Used as an evaluation-pipeline oracle.
std::vector<std::size_t> perfect_memory_predictions(const Episode& ep, RngStream& rng);

// Per-step read/write weight snapshots for validity checks.
struct MannWeightTrace {
    std::vector<std::vector<Matrix>> read_weights;   // [step][head]
    std::vector<std::vector<Matrix>> write_weights;  // [step][head]
};

MannWeightTrace mann_weight_trace(const Episode& ep, const MannConfig& cfg,
                                  const ParamSet& params);

struct MannEpisodeCache {
    struct Step {
        Matrix pre_input;   // 1 x 160 flattened scene
        RnCache rn_cache;
        MlpCache mlp_cache;
        Matrix features;
        Matrix x;           // controller input
        LstmStepCache lstm;
        Matrix h;
        std::vector<Matrix> key_pre;   // tanh outputs per head (1 x W)
        std::vector<Matrix> write_pre; // tanh outputs per head (1 x W)
        std::vector<double> alphas;
        LruaWriteCache write_cache;
        std::vector<CosineReadCache> read_caches;
        std::vector<Matrix> read_vectors;
        Matrix readout_in;  // 1 x (h + R*W)
        Matrix logits;
    };
    std::vector<Step> steps;
    MemoryState initial_memory;
    LstmState initial_lstm;
};

}  // namespace relnet
