#pragma once

#include <string>

#include "torusflow/spectral_field.hpp"

namespace torusflow {

/// Self-describing snapshot of a spectral field: JSON with box size, cutoff,
/// component count, the full mode list as (k1,k2,k3, re/im per component),
/// and metadata (time, step, config hash). Doubles are written in shortest
/// round-trip form, so re-reading is bit-exact.
struct Checkpoint {
    SpectralField field;
    Real time = 0.0;
    long step = 0;
    std::string config_hash;
    std::string config_json;  // compact resolved config; optional
};

std::string checkpoint_to_json(const Checkpoint& cp);
Checkpoint checkpoint_from_json(const std::string& text);

void write_checkpoint(const std::string& path, const Checkpoint& cp);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace torusflow
