#pragma once

#include <string>

#include "survkit/train.hpp"

namespace survkit {

// Checkpoint format: magic 'CXMP', u16 LE version (=1), u8 kind
// (0 unimodal / 1 intermediate), kind-specific dims, the MLP config, then
// every parameter block as float64 LE in param_blocks order.
void save_model(const RiskModel& model, const std::string& path);
RiskModel load_model(const std::string& path);

}  // namespace survkit
