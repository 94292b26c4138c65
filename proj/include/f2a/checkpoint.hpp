#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "f2a/networks.hpp"
#include "f2a/optim.hpp"

namespace f2a {

struct Checkpoint {
    ModelBundle bundle;
    std::optional<AdamState> adam_g, adam_d;
    nlohmann::json extra; // caller-owned metadata block, round-tripped as-is
};

// Writes models, optional optimizer state, and self-describing metadata
// (format version, architecture, config hash, epoch/step/seed) to a single
// named-tensor archive. save -> load -> save is byte-identical.
void save_checkpoint(const std::string& path, const ModelBundle& bundle,
                     const AdamState* adam_g = nullptr,
                     const AdamState* adam_d = nullptr,
                     const nlohmann::json& extra = nlohmann::json::object());

// Rebuilds the bundle from embedded metadata. Corrupt files and metadata
// that disagrees with its own config hash raise CheckpointError.
Checkpoint load_checkpoint(const std::string& path);

// Additionally demands a specific architecture; refuses a mismatch before
// touching any parameter.
Checkpoint load_checkpoint(const std::string& path,
                           const GeneratorSpec& expected_gen,
                           bool expect_discriminator);

} // namespace f2a
