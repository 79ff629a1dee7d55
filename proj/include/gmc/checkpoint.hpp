//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>

#include "gmc/model.hpp"

namespace gmc {

// Checkpoint file: magic "GMCM", version u32, config as a length-prefixed
// key=value block, featurization fingerprint, then per-array records
// (name, rank, dims, row-major little-endian f64). Round-trips bit-exactly.
void save_checkpoint(const ModelParams& model, const std::string& path);
ModelParams load_checkpoint(const std::string& path);

// Config <-> key=value text block used inside checkpoints.
std::string train_config_to_text(const TrainConfig& config);
TrainConfig train_config_from_text(const std::string& text);

}  // namespace gmc
