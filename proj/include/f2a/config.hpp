#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace f2a {

enum class Ablation { DEFAULT, R_PLUS_A, R_ONLY, UNET_SCRATCH };

std::string to_string(Ablation a);
Ablation ablation_from_string(const std::string& s);

// Masking applies only in the DEFAULT condition; R_PLUS_A keeps the
// adversarial term unmasked; R_ONLY and UNET_SCRATCH train reconstruction
// only (UNET_SCRATCH optionally adversarial via unet_adversarial).
struct RunConfig {
    double lambda = 1.0;
    double lr_generator = 2e-5;
    double lr_discriminator = 2e-6;
    double adam_beta1 = 0.5;
    double adam_beta2 = 0.999;
    std::int64_t epochs = 1000;
    int batch_size = 1;
    int crop = 224;
    std::uint64_t seed = 0;
    Ablation ablation = Ablation::DEFAULT;
    std::string manifest;
    std::string weights_archive; // empty = random-init encoder
    std::string output_dir = "runs/default";
    std::int64_t checkpoint_every = 50; // epochs
    std::int64_t max_steps = 0;         // 0 = no cap
    bool canonical_resize = true;
    bool cache_images = false; // decoded-image cache; sized for small sets
    bool unet_adversarial = false;

    bool uses_mask() const { return ablation == Ablation::DEFAULT; }
    bool uses_discriminator() const {
        switch (ablation) {
            case Ablation::DEFAULT:
            case Ablation::R_PLUS_A: return true;
            case Ablation::R_ONLY: return false;
            case Ablation::UNET_SCRATCH: return unet_adversarial;
        }
        return false;
    }
    // λ as wired into the objective; 0 whenever no discriminator exists.
    double effective_lambda() const { return uses_discriminator() ? lambda : 0.0; }

    // Throws on invalid values; returns human-readable warnings (notably the
    // discriminator-not-slower-than-generator learning-rate warning).
    std::vector<std::string> validate() const;
};

// Applies `key = value` lines ('#' comments allowed) onto cfg. Keys mirror
// the field names above. Unknown keys and unparsable values error with the
// line number.
void apply_config_file(RunConfig& cfg, const std::string& path);

} // namespace f2a
