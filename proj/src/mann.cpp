#include "relnet/mann.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "relnet/kernels.hpp"
#include "relnet/losses.hpp"

namespace relnet {

Episode build_episode(const std::vector<SceneClass>& pool, std::size_t class_count,
                      std::size_t length, const GeneratorParams& gen_params,
                      RngStream& rng) {
    if (pool.size() < class_count) {
        throw std::invalid_argument("build_episode: pool has " + std::to_string(pool.size()) +
                                    " classes, need " + std::to_string(class_count));
    }
    // Classes without replacement.
    std::vector<std::size_t> chosen;
    std::set<std::size_t> seen;
    while (chosen.size() < class_count) {
        const std::size_t c = rng.uniform_index(pool.size());
        if (seen.insert(c).second) {
            chosen.push_back(c);
        }
    }
    // Episode-local label bijection.
    std::vector<std::size_t> labels(class_count);
    for (std::size_t i = 0; i < class_count; ++i) {
        labels[i] = i;
    }
    for (std::size_t i = class_count; i > 1; --i) {
        std::swap(labels[i - 1], labels[rng.uniform_index(i)]);
    }

    Episode ep;
    ep.label_count = class_count;
    std::vector<std::size_t> occurrences(class_count, 0);
    std::vector<double> prev_target(class_count, 0.0);
    for (std::size_t t = 0; t < length; ++t) {
        const std::size_t ci = rng.uniform_index(class_count);
        EpisodeStep step;
        RngStream scene_rng = rng.split(0x657073 + t);
        step.scene = generate_scene(pool[chosen[ci]], gen_params, scene_rng);
        step.class_index = ci;
        step.class_instance_index = ++occurrences[ci];
        step.input_label = prev_target;
        step.target_label.assign(class_count, 0.0);
        step.target_label[labels[ci]] = 1.0;
        prev_target = step.target_label;
        ep.steps.push_back(std::move(step));
    }
    return ep;
}

void episode_dump(const Episode& ep, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("episode_dump: cannot open " + path);
    }
    for (std::size_t t = 0; t < ep.steps.size(); ++t) {
        const EpisodeStep& s = ep.steps[t];
        nlohmann::json line;
        line["step"] = t;
        line["class_index"] = s.class_index;
        line["class_instance_index"] = s.class_instance_index;
        line["input_label"] = s.input_label;
        line["target_label"] = s.target_label;
        line["D"] = s.scene.values();
        out << line.dump() << "\n";
    }
}

MannConfig make_mann_config(PreprocKind preproc, std::size_t feature_width,
                            std::size_t label_count, std::size_t controller_size,
                            const MemoryConfig& memory,
                            std::vector<std::size_t> pre_hidden, std::size_t g_out) {
    MannConfig cfg;
    cfg.preproc = preproc;
    cfg.feature_width = feature_width;
    cfg.label_count = label_count;
    cfg.memory = memory;
    if (preproc == PreprocKind::rn) {
        cfg.rn = make_rn_spec(kObjectCount, kFeatureCount, pre_hidden, g_out,
                              pre_hidden, feature_width);
    } else {
        cfg.mlp = {kFlatSize, std::move(pre_hidden), feature_width};
    }
    cfg.controller = {0, controller_size};
    return cfg;
}

ParamSet mann_init(MannConfig& cfg, RngStream& rng) {
    cfg.controller.input = cfg.controller_input();
    ParamSet params;
    if (cfg.preproc == PreprocKind::rn) {
        rn_init(cfg.rn, params, rng, "pre.");
    } else {
        mlp_init(cfg.mlp, "pre.", params, rng);
    }
    lstm_init(cfg.controller, "lstm.", params, rng);
    const std::size_t h = cfg.controller.hidden;
    const std::size_t w = cfg.memory.width;
    for (std::size_t r = 0; r < cfg.memory.heads; ++r) {
        const std::string p = "h" + std::to_string(r) + ".";
        Matrix wk(h, w), wa(h, w), wg(h, 1);
        init_glorot(wk, rng);
        init_glorot(wa, rng);
        init_glorot(wg, rng);
        params.add(p + "Wk", std::move(wk));
        params.add(p + "bk", Matrix(1, w));
        params.add(p + "Wa", std::move(wa));
        params.add(p + "ba", Matrix(1, w));
        params.add(p + "Wg", std::move(wg));
        params.add(p + "bg", Matrix(1, 1));
    }
    Matrix wo(h + cfg.memory.heads * w, cfg.label_count);
    init_glorot(wo, rng);
    params.add("out.W", std::move(wo));
    params.add("out.b", Matrix(1, cfg.label_count));
    return params;
}

namespace {

Matrix row_from(const std::vector<double>& v) {
    return Matrix(1, v.size(), v);
}

Matrix tanh_affine(const Matrix& h, const Matrix& w, const Matrix& b) {
    Matrix out = affine_forward(h, w, b);
    for (double& v : out.values()) {
        v = std::tanh(v);
    }
    return out;
}

}  // namespace

MannForwardResult mann_episode_forward(const Episode& ep, const MannConfig& cfg,
                                       const ParamSet& params, MannEpisodeCache* cache,
                                       const MemoryState* initial,
                                       const LstmState* initial_lstm) {
    if (ep.label_count != cfg.label_count) {
        throw std::invalid_argument("mann_episode_forward: episode has " +
                                    std::to_string(ep.label_count) + " labels, config " +
                                    std::to_string(cfg.label_count));
    }
    const std::size_t heads = cfg.memory.heads;
    const std::size_t w = cfg.memory.width;
    const std::size_t hs = cfg.controller.hidden;
    const auto& ops = kernels::active_ops();

    MemoryState mem = initial != nullptr ? *initial : MemoryState::init(cfg.memory);
    LstmState lstm = initial_lstm != nullptr ? *initial_lstm : LstmState::zero(hs);
    std::vector<Matrix> prev_reads(heads, Matrix(1, w));

    if (cache != nullptr) {
        cache->steps.clear();
        cache->initial_memory = mem;
        cache->initial_lstm = lstm;
    }

    MannForwardResult result;
    for (const EpisodeStep& es : ep.steps) {
        MannEpisodeCache::Step sc;
        sc.pre_input = Matrix(1, kFlatSize, es.scene.values());
        if (cfg.preproc == PreprocKind::rn) {
            sc.features = rn_forward(sc.pre_input, cfg.rn, params,
                                     cache != nullptr ? &sc.rn_cache : nullptr, "pre.");
        } else {
            sc.features = mlp_forward(sc.pre_input, cfg.mlp, "pre.", params,
                                      cache != nullptr ? &sc.mlp_cache : nullptr);
        }

        // Controller input: features, time-offset label, previous reads.
        sc.x = Matrix(1, cfg.controller_input());
        std::size_t off = 0;
        std::memcpy(sc.x.data() + off, sc.features.data(), cfg.feature_width * sizeof(double));
        off += cfg.feature_width;
        std::memcpy(sc.x.data() + off, es.input_label.data(),
                    cfg.label_count * sizeof(double));
        off += cfg.label_count;
        for (std::size_t r = 0; r < heads; ++r) {
            std::memcpy(sc.x.data() + off, prev_reads[r].data(), w * sizeof(double));
            off += w;
        }

        lstm = lstm_step(sc.x, lstm, cfg.controller, "lstm.", params,
                         cache != nullptr ? &sc.lstm : nullptr);
        sc.h = lstm.h;

        std::vector<Matrix> write_vecs;
        std::vector<double> alphas;
        for (std::size_t r = 0; r < heads; ++r) {
            const std::string p = "h" + std::to_string(r) + ".";
            sc.key_pre.push_back(tanh_affine(sc.h, params.at(p + "Wk"), params.at(p + "bk")));
            write_vecs.push_back(tanh_affine(sc.h, params.at(p + "Wa"), params.at(p + "ba")));
            alphas.push_back(affine_forward(sc.h, params.at(p + "Wg"),
                                            params.at(p + "bg"))(0, 0));
        }
        sc.write_pre = write_vecs;
        sc.alphas = alphas;

        lrua_write(mem, write_vecs, alphas, cache != nullptr ? &sc.write_cache : nullptr);

        sc.read_caches.resize(heads);
        std::vector<Matrix> read_weights;
        sc.read_vectors.clear();
        for (std::size_t r = 0; r < heads; ++r) {
            CosineReadResult rr = cosine_read(sc.key_pre[r], 1.0, mem.memory,
                                              cache != nullptr ? &sc.read_caches[r] : nullptr);
            read_weights.push_back(rr.weights);
            sc.read_vectors.push_back(std::move(rr.read));
        }
        finish_memory_step(mem, read_weights, cfg.memory.gamma);

        sc.readout_in = Matrix(1, hs + heads * w);
        std::memcpy(sc.readout_in.data(), sc.h.data(), hs * sizeof(double));
        for (std::size_t r = 0; r < heads; ++r) {
            std::memcpy(sc.readout_in.data() + hs + r * w, sc.read_vectors[r].data(),
                        w * sizeof(double));
        }
        sc.logits = affine_forward(sc.readout_in, params.at("out.W"), params.at("out.b"));

        const LossResult lr = softmax_xent(sc.logits, row_from(es.target_label));
        result.loss += lr.loss;
        result.logits.push_back(sc.logits);
        std::size_t best = 0;
        for (std::size_t c = 1; c < cfg.label_count; ++c) {
            if (sc.logits(0, c) > sc.logits(0, best)) {
                best = c;
            }
        }
        result.predictions.push_back(best);

        prev_reads = sc.read_vectors;
        if (cache != nullptr) {
            cache->steps.push_back(std::move(sc));
        }
        (void)ops;
    }
    result.final_memory = std::move(mem);
    return result;
}

ParamSet mann_episode_backward(const Episode& ep, const MannConfig& cfg,
                               const ParamSet& params, const MannEpisodeCache& cache) {
    if (cache.steps.size() != ep.steps.size()) {
        throw std::invalid_argument("mann_episode_backward: cache does not match episode");
    }
    const std::size_t heads = cfg.memory.heads;
    const std::size_t w = cfg.memory.width;
    const std::size_t hs = cfg.controller.hidden;
    const std::size_t n = cfg.memory.slots;
    const auto& ops = kernels::active_ops();

    ParamSet grads = params.zeros_like();

    Matrix dh_next(1, hs);
    Matrix dc_next(1, hs);
    Matrix dmem(n, w);                                  // d loss / d memory after step t
    std::vector<Matrix> dreads_next(heads, Matrix(1, w));   // via next controller input
    std::vector<Matrix> dread_w_next(heads, Matrix(1, n));  // via next step's write

    for (std::size_t t = ep.steps.size(); t-- > 0;) {
        const MannEpisodeCache::Step& sc = cache.steps[t];
        const EpisodeStep& es = ep.steps[t];

        // Loss is summed over steps, each step a batch of one.
        Matrix dlogits = softmax_rows(sc.logits);
        for (std::size_t c = 0; c < cfg.label_count; ++c) {
            dlogits(0, c) -= es.target_label[c];
        }

        Matrix dwo = matmul_tn(sc.readout_in, dlogits);
        Matrix& gwo = grads.at("out.W");
        ops.add(dwo.data(), gwo.data(), gwo.size());
        Matrix& gbo = grads.at("out.b");
        ops.add(dlogits.data(), gbo.data(), gbo.size());
        Matrix dreadout = matmul_nt(dlogits, params.at("out.W"));

        Matrix dh = dh_next;
        ops.add(dreadout.data(), dh.data(), hs);
        std::vector<Matrix> dread_vecs = dreads_next;
        for (std::size_t r = 0; r < heads; ++r) {
            ops.add(dreadout.data() + hs + r * w, dread_vecs[r].data(), w);
        }

        // Reads happened against the post-write memory of this step.
        std::vector<Matrix> dkeys(heads);
        for (std::size_t r = 0; r < heads; ++r) {
            CosineReadGrads rg = cosine_read_backward(dread_w_next[r], dread_vecs[r], 1.0,
                                                      sc.read_caches[r]);
            dkeys[r] = std::move(rg.dkey);
            ops.add(rg.dmemory.data(), dmem.data(), dmem.size());
        }

        LruaWriteGrads wg = lrua_write_backward(dmem, sc.write_cache, n);
        dread_w_next = wg.dread_weights_prev;
        dmem = std::move(wg.dmemory_prev);

        // Head projections.
        for (std::size_t r = 0; r < heads; ++r) {
            const std::string p = "h" + std::to_string(r) + ".";
            Matrix dkey_pre(1, w);
            for (std::size_t i = 0; i < w; ++i) {
                const double v = sc.key_pre[r](0, i);
                dkey_pre(0, i) = dkeys[r](0, i) * (1.0 - v * v);
            }
            Matrix dwk = matmul_tn(sc.h, dkey_pre);
            Matrix& gwk = grads.at(p + "Wk");
            ops.add(dwk.data(), gwk.data(), gwk.size());
            Matrix& gbk = grads.at(p + "bk");
            ops.add(dkey_pre.data(), gbk.data(), gbk.size());
            Matrix dh_k = matmul_nt(dkey_pre, params.at(p + "Wk"));
            ops.add(dh_k.data(), dh.data(), hs);

            Matrix dwrite_pre(1, w);
            for (std::size_t i = 0; i < w; ++i) {
                const double v = sc.write_pre[r](0, i);
                dwrite_pre(0, i) = wg.dwrite_vectors[r](0, i) * (1.0 - v * v);
            }
            Matrix dwa = matmul_tn(sc.h, dwrite_pre);
            Matrix& gwa = grads.at(p + "Wa");
            ops.add(dwa.data(), gwa.data(), gwa.size());
            Matrix& gba = grads.at(p + "ba");
            ops.add(dwrite_pre.data(), gba.data(), gba.size());
            Matrix dh_a = matmul_nt(dwrite_pre, params.at(p + "Wa"));
            ops.add(dh_a.data(), dh.data(), hs);

            const double dalpha = wg.dalphas[r];
            Matrix& gwg = grads.at(p + "Wg");
            for (std::size_t i = 0; i < hs; ++i) {
                gwg(i, 0) += sc.h(0, i) * dalpha;
            }
            grads.at(p + "bg")(0, 0) += dalpha;
            const Matrix& wgp = params.at(p + "Wg");
            for (std::size_t i = 0; i < hs; ++i) {
                dh(0, i) += dalpha * wgp(i, 0);
            }
        }

        LstmStepGrads lg = lstm_step_backward(dh, dc_next, cfg.controller, "lstm.", params,
                                              sc.lstm, grads);
        dh_next = std::move(lg.dh_prev);
        dc_next = std::move(lg.dc_prev);

        // Split the controller-input gradient.
        Matrix dfeat(1, cfg.feature_width, std::vector<double>(
                         lg.dx.data(), lg.dx.data() + cfg.feature_width));
        for (std::size_t r = 0; r < heads; ++r) {
            const double* src = lg.dx.data() + cfg.feature_width + cfg.label_count + r * w;
            dreads_next[r] = Matrix(1, w, std::vector<double>(src, src + w));
        }

        if (cfg.preproc == PreprocKind::rn) {
            rn_backward(dfeat, cfg.rn, params, sc.rn_cache, grads, "pre.");
        } else {
            mlp_backward(dfeat, cfg.mlp, "pre.", params, sc.mlp_cache, grads);
        }
    }
    return grads;
}

std::pair<double, ParamSet> mann_episode_loss_grads(const Episode& ep, const MannConfig& cfg,
                                                    const ParamSet& params) {
    MannEpisodeCache cache;
    MannForwardResult fwd = mann_episode_forward(ep, cfg, params, &cache);
    ParamSet grads = mann_episode_backward(ep, cfg, params, cache);
    return {fwd.loss, std::move(grads)};
}

std::vector<double> instance_accuracy(const std::vector<std::vector<std::size_t>>& predictions,
                                      const std::vector<Episode>& episodes,
                                      std::size_t max_k) {
    if (predictions.size() != episodes.size()) {
        throw std::invalid_argument("instance_accuracy: predictions/episodes mismatch");
    }
    std::vector<double> correct(max_k, 0.0), total(max_k, 0.0);
    for (std::size_t e = 0; e < episodes.size(); ++e) {
        const Episode& ep = episodes[e];
        if (predictions[e].size() != ep.steps.size()) {
            throw std::invalid_argument("instance_accuracy: step count mismatch in episode " +
                                        std::to_string(e));
        }
        for (std::size_t t = 0; t < ep.steps.size(); ++t) {
            const std::size_t k = ep.steps[t].class_instance_index;
            if (k == 0 || k > max_k) {
                continue;
            }
            total[k - 1] += 1.0;
            if (ep.steps[t].target_label[predictions[e][t]] == 1.0) {
                correct[k - 1] += 1.0;
            }
        }
    }
    std::vector<double> acc(max_k);
    for (std::size_t k = 0; k < max_k; ++k) {
        acc[k] = total[k] > 0.0 ? correct[k] / total[k]
                                : std::numeric_limits<double>::quiet_NaN();
    }
    return acc;
}

std::vector<std::size_t> perfect_memory_predictions(const Episode& ep, RngStream& rng) {
    std::vector<std::size_t> preds;
    for (const EpisodeStep& s : ep.steps) {
        if (s.class_instance_index >= 2) {
            // A prior instance's label has been revealed via the offset input.
            std::size_t lbl = 0;
            for (std::size_t c = 0; c < s.target_label.size(); ++c) {
                if (s.target_label[c] == 1.0) {
                    lbl = c;
                }
            }
            preds.push_back(lbl);
        } else {
            preds.push_back(rng.uniform_index(ep.label_count));
        }
    }
    return preds;
}

MannWeightTrace mann_weight_trace(const Episode& ep, const MannConfig& cfg,
                                  const ParamSet& params) {
    MannEpisodeCache cache;
    mann_episode_forward(ep, cfg, params, &cache);
    MannWeightTrace trace;
    for (const auto& sc : cache.steps) {
        std::vector<Matrix> rw;
        for (const auto& rc : sc.read_caches) {
            rw.push_back(rc.weights);
        }
        trace.read_weights.push_back(std::move(rw));
        trace.write_weights.push_back(sc.write_cache.write_weights);
    }
    return trace;
}

}  // namespace relnet
