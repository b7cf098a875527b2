#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cgfl/tensor.hpp"

namespace cgfl {

/// Named parameters in a stable order. Checkpoint files start with the
/// header line "cgfl-ckpt-v1", then one "name rows cols" line plus one
/// whitespace-separated value line per tensor.
using NamedParams = std::vector<std::pair<std::string, Tensor>>;

void save_checkpoint(const std::string& path, const NamedParams& params);
NamedParams load_checkpoint(const std::string& path);

}  // namespace cgfl
