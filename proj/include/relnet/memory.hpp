#pragma once

#include <vector>

#include "relnet/matrix.hpp"

namespace relnet {

struct MemoryConfig {
    std::size_t slots = 32;   // N (paper scale: 128)
    std::size_t width = 20;   // W (paper scale: 40)
    std::size_t heads = 2;    // R read and R write heads (paper scale: 4)
    double gamma = 0.95;      // usage decay
};

// External memory snapshot threaded through an episode.
struct MemoryState {
    Matrix memory;                            // N x W
    Matrix usage;                             // 1 x N
    std::vector<Matrix> read_weights;         // per head, 1 x N
    std::vector<Matrix> write_weights;        // per head, 1 x N
    std::vector<std::size_t> least_used;      // heads slots of smallest usage, ascending

    static MemoryState init(const MemoryConfig& cfg);
};

// The `heads` slots with smallest usage (ties broken by index), ascending.
std::vector<std::size_t> least_used_slots(const Matrix& usage, std::size_t heads);

struct CosineReadCache {
    Matrix key;
    Matrix memory;          // memory matrix the read was taken against
    Matrix sims;            // 1 x N scaled similarities fed to softmax
    Matrix weights;         // 1 x N
    double key_norm = 0.0;  // after flooring
    bool key_floored = false;
    std::vector<double> row_norms;  // after flooring
    std::vector<bool> row_floored;
};

struct CosineReadResult {
    Matrix weights;  // 1 x N, nonnegative, sums to 1
    Matrix read;     // 1 x W
};

// weights = softmax(key_strength * cos(key, memory_i)); read = weights * memory.
// Norms are floored at 1e-12 so all-zero rows degrade to uniform addressing.
CosineReadResult cosine_read(const Matrix& key, double key_strength, const Matrix& memory,
                             CosineReadCache* cache = nullptr);

struct CosineReadGrads {
    Matrix dkey;
    Matrix dmemory;
};

// dweights: gradient arriving at the read weights; dread: gradient at the
// read vector. key_strength must match the forward call.
CosineReadGrads cosine_read_backward(const Matrix& dweights, const Matrix& dread,
                                     double key_strength, const CosineReadCache& cache);

struct LruaWriteCache {
    std::vector<double> gate;               // sigma(alpha) per head
    std::vector<Matrix> write_weights;      // per head, 1 x N
    std::vector<Matrix> write_vectors;      // per head, 1 x W
    std::vector<Matrix> read_weights_prev;  // per head, 1 x N
    std::vector<std::size_t> lu_slots;      // slot written by each head's LRU path
};

// Interpolated least-recently-used write:
//   w_w = sigma(alpha) * w_r_prev + (1 - sigma(alpha)) * onehot(lu_head)
// The least-used rows are zeroed before any head writes, then
// memory_row_i += w_w(i) * write_vector for every head. Usage and the
// least-used set are updated afterwards via finish_memory_step.
void lrua_write(MemoryState& state, const std::vector<Matrix>& write_vectors,
                const std::vector<double>& alphas, LruaWriteCache* cache = nullptr);

struct LruaWriteGrads {
    Matrix dmemory_prev;                 // gradient w.r.t. memory before the write
    std::vector<Matrix> dwrite_vectors;  // per head, 1 x W
    std::vector<double> dalphas;
    std::vector<Matrix> dread_weights_prev;  // per head, 1 x N
};

LruaWriteGrads lrua_write_backward(const Matrix& dmemory_after, const LruaWriteCache& cache,
                                   std::size_t slots);

// usage <- gamma * usage + sum_heads w_r + sum_heads w_w; recomputes the
// least-used set. Call after the reads of the step.
void finish_memory_step(MemoryState& state, const std::vector<Matrix>& read_weights,
                        double gamma);

}  // namespace relnet
