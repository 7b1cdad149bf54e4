#include "relnet/memory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "relnet/kernels.hpp"
#include "relnet/losses.hpp"

namespace relnet {

namespace {
constexpr double kNormFloor = 1e-12;
}

MemoryState MemoryState::init(const MemoryConfig& cfg) {
    MemoryState s;
    s.memory = Matrix(cfg.slots, cfg.width, 1e-6);
    s.usage = Matrix(1, cfg.slots);
    s.read_weights.assign(cfg.heads,
                          Matrix(1, cfg.slots, 1.0 / static_cast<double>(cfg.slots)));
    s.write_weights.assign(cfg.heads, Matrix(1, cfg.slots));
    s.least_used = least_used_slots(s.usage, cfg.heads);
    return s;
}

std::vector<std::size_t> least_used_slots(const Matrix& usage, std::size_t heads) {
    std::vector<std::size_t> idx(usage.cols());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&usage](std::size_t a, std::size_t b) {
        return usage(0, a) < usage(0, b);
    });
    idx.resize(heads);
    return idx;
}

CosineReadResult cosine_read(const Matrix& key, double key_strength, const Matrix& memory,
                             CosineReadCache* cache) {
    const std::size_t n = memory.rows();
    const std::size_t w = memory.cols();
    if (key.rows() != 1 || key.cols() != w) {
        throw std::invalid_argument("cosine_read: key must be 1x" + std::to_string(w) +
                                    ", got " + key.shape_str());
    }
    const auto& ops = kernels::active_ops();

    double key_norm = std::sqrt(ops.dot(key.data(), key.data(), w));
    const bool key_floored = key_norm < kNormFloor;
    if (key_floored) {
        key_norm = kNormFloor;
    }

    Matrix sims(1, n);
    std::vector<double> row_norms(n);
    std::vector<bool> row_floored(n);
    for (std::size_t i = 0; i < n; ++i) {
        double rn = std::sqrt(ops.dot(memory.row(i), memory.row(i), w));
        row_floored[i] = rn < kNormFloor;
        if (row_floored[i]) {
            rn = kNormFloor;
        }
        row_norms[i] = rn;
        sims(0, i) = key_strength * ops.dot(key.data(), memory.row(i), w) / (key_norm * rn);
    }

    Matrix weights = softmax_rows(sims);
    Matrix read(1, w);
    for (std::size_t i = 0; i < n; ++i) {
        ops.axpy(weights(0, i), memory.row(i), read.data(), w);
    }

    if (cache != nullptr) {
        cache->key = key;
        cache->memory = memory;
        cache->sims = sims;
        cache->weights = weights;
        cache->key_norm = key_norm;
        cache->key_floored = key_floored;
        cache->row_norms = std::move(row_norms);
        cache->row_floored = std::move(row_floored);
    }
    return {std::move(weights), std::move(read)};
}

CosineReadGrads cosine_read_backward(const Matrix& dweights_in, const Matrix& dread,
                                     double key_strength, const CosineReadCache& cache) {
    const std::size_t n = cache.memory.rows();
    const std::size_t w = cache.memory.cols();
    const auto& ops = kernels::active_ops();

    CosineReadGrads out;
    out.dkey = Matrix(1, w);
    out.dmemory = Matrix(n, w);

    // read = weights * memory
    Matrix dweights = dweights_in;
    for (std::size_t i = 0; i < n; ++i) {
        ops.axpy(cache.weights(0, i), dread.data(), out.dmemory.row(i), w);
        dweights(0, i) += ops.dot(dread.data(), cache.memory.row(i), w);
    }

    // softmax backward: ds_i = w_i * (dw_i - sum_j dw_j w_j)
    double inner = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        inner += dweights(0, i) * cache.weights(0, i);
    }
    Matrix dsims(1, n);
    for (std::size_t i = 0; i < n; ++i) {
        dsims(0, i) = cache.weights(0, i) * (dweights(0, i) - inner);
    }

    // sims_i = strength * (k . m_i) / (|k| |m_i|), norms floored; a floored
    // norm is a constant, so its branch contributes no gradient.
    for (std::size_t i = 0; i < n; ++i) {
        const double ds = dsims(0, i) * key_strength;
        if (ds == 0.0) {
            continue;
        }
        const double nk = cache.key_norm;
        const double nm = cache.row_norms[i];
        const double dotkm = ops.dot(cache.key.data(), cache.memory.row(i), w);
        const double inv = 1.0 / (nk * nm);
        // d/dk
        ops.axpy(ds * inv, cache.memory.row(i), out.dkey.data(), w);
        if (!cache.key_floored) {
            ops.axpy(-ds * dotkm / (nk * nk * nk * nm), cache.key.data(),
                     out.dkey.data(), w);
        }
        // d/dm_i
        ops.axpy(ds * inv, cache.key.data(), out.dmemory.row(i), w);
        if (!cache.row_floored[i]) {
            ops.axpy(-ds * dotkm / (nk * nm * nm * nm), cache.memory.row(i),
                     out.dmemory.row(i), w);
        }
    }
    return out;
}

void lrua_write(MemoryState& state, const std::vector<Matrix>& write_vectors,
                const std::vector<double>& alphas, LruaWriteCache* cache) {
    const std::size_t heads = state.read_weights.size();
    const std::size_t n = state.memory.rows();
    const std::size_t w = state.memory.cols();
    if (write_vectors.size() != heads || alphas.size() != heads) {
        throw std::invalid_argument("lrua_write: expected one write vector and gate per head");
    }
    const auto& ops = kernels::active_ops();

    if (cache != nullptr) {
        cache->gate.clear();
        cache->write_weights.clear();
        cache->write_vectors = write_vectors;
        cache->read_weights_prev = state.read_weights;
        cache->lu_slots = state.least_used;
    }

    // Zero the rows about to receive least-used writes.
    for (std::size_t h = 0; h < heads; ++h) {
        const std::size_t slot = state.least_used[h % state.least_used.size()];
        std::fill(state.memory.row(slot), state.memory.row(slot) + w, 0.0);
    }

    for (std::size_t h = 0; h < heads; ++h) {
        const double gate = sigmoid(alphas[h]);
        const std::size_t lu = state.least_used[h % state.least_used.size()];
        Matrix ww(1, n);
        for (std::size_t i = 0; i < n; ++i) {
            ww(0, i) = gate * state.read_weights[h](0, i);
        }
        ww(0, lu) += 1.0 - gate;
        for (std::size_t i = 0; i < n; ++i) {
            if (ww(0, i) != 0.0) {
                ops.axpy(ww(0, i), write_vectors[h].data(), state.memory.row(i), w);
            }
        }
        state.write_weights[h] = ww;
        if (cache != nullptr) {
            cache->gate.push_back(gate);
            cache->write_weights.push_back(std::move(ww));
        }
    }
}

LruaWriteGrads lrua_write_backward(const Matrix& dmemory_after, const LruaWriteCache& cache,
                                   std::size_t slots) {
    const std::size_t heads = cache.gate.size();
    const std::size_t w = dmemory_after.cols();
    const auto& ops = kernels::active_ops();

    LruaWriteGrads out;
    out.dmemory_prev = dmemory_after;
    for (std::size_t h = 0; h < heads; ++h) {
        const std::size_t slot = cache.lu_slots[h % cache.lu_slots.size()];
        std::fill(out.dmemory_prev.row(slot), out.dmemory_prev.row(slot) + w, 0.0);
    }

    out.dwrite_vectors.assign(heads, Matrix(1, w));
    out.dalphas.assign(heads, 0.0);
    out.dread_weights_prev.assign(heads, Matrix(1, slots));
    for (std::size_t h = 0; h < heads; ++h) {
        const Matrix& ww = cache.write_weights[h];
        Matrix dww(1, slots);
        for (std::size_t i = 0; i < slots; ++i) {
            if (ww(0, i) != 0.0) {
                ops.axpy(ww(0, i), dmemory_after.row(i), out.dwrite_vectors[h].data(), w);
            }
            dww(0, i) = ops.dot(dmemory_after.row(i), cache.write_vectors[h].data(), w);
        }
        const double gate = cache.gate[h];
        const std::size_t lu = cache.lu_slots[h % cache.lu_slots.size()];
        double dgate = 0.0;
        for (std::size_t i = 0; i < slots; ++i) {
            dgate += dww(0, i) * cache.read_weights_prev[h](0, i);
            out.dread_weights_prev[h](0, i) = gate * dww(0, i);
        }
        dgate -= dww(0, lu);
        out.dalphas[h] = dgate * gate * (1.0 - gate);
    }
    return out;
}

void finish_memory_step(MemoryState& state, const std::vector<Matrix>& read_weights,
                        double gamma) {
    const std::size_t heads = state.read_weights.size();
    if (read_weights.size() != heads) {
        throw std::invalid_argument("finish_memory_step: head count mismatch");
    }
    for (std::size_t i = 0; i < state.usage.cols(); ++i) {
        double u = gamma * state.usage(0, i);
        for (std::size_t h = 0; h < heads; ++h) {
            u += read_weights[h](0, i) + state.write_weights[h](0, i);
        }
        state.usage(0, i) = u;
    }
    state.read_weights = read_weights;
    state.least_used = least_used_slots(state.usage, heads);
}

}  // namespace relnet
