#pragma once

#include <map>
#include <string>

#include "relnet/param_set.hpp"

namespace relnet {

// Parameter checkpoint: JSON with a metadata header and row-major double
// arrays, bit-exact across a write/read round trip.
struct Checkpoint {
    std::string model;                         // "rn", "mlp", "linear_rn", "mann"
    std::map<std::string, std::string> meta;   // spec fields needed to rebuild the model
    ParamSet params;
};

void checkpoint_write(const Checkpoint& ck, const std::string& path);
Checkpoint checkpoint_read(const std::string& path);

}  // namespace relnet
