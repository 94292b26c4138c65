#pragma once

#include <functional>
#include <string>
#include <vector>

#include "f2a/image.hpp"

namespace f2a {

struct DatasetManifest;
struct ModelBundle;

// 10*log10(1/MSE) in dB over all channels jointly (pixel domain [0,1], so
// MAX = 1). Identical images return +infinity.
double psnr(const Image& reference, const Image& candidate);

// Mean local SSIM over an 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
// K2 = 0.03, L = 1; computed per channel on the valid (fully overlapped)
// region, averaged over pixels then channels. Both images must be at least
// 11x11.
double ssim(const Image& reference, const Image& candidate);

struct EvalRecord {
    std::string pair_id;
    double psnr_db = 0.0;
    double ssim = 0.0;
};

struct EvalReport {
    std::vector<EvalRecord> per_image;   // sorted by pair_id
    double mean_psnr = 0.0;              // mean over finite PSNR entries
    double mean_ssim = 0.0;
    int infinite_psnr_count = 0;         // excluded from mean_psnr
    std::vector<std::string> errors;     // per-item failures (item skipped)

    std::string render_table(const std::string& method_name) const;
    void write(const std::string& path) const;
};

struct EvalOptions {
    // Resize pairs to the canonical evaluation resolution first. Disabled for
    // desk-scale datasets whose native size is the trained size.
    bool canonical_resize = true;
};

// Runs `model` on each test-split flash image and compares the raw output
// against the ambient ground truth. Items that fail to load are recorded in
// `errors` and skipped.
using ForwardFn = std::function<Image(const Image&)>;
EvalReport evaluate(const DatasetManifest& manifest, const ForwardFn& model,
                    const EvalOptions& opts = {});
EvalReport evaluate(const DatasetManifest& manifest, const ModelBundle& bundle,
                    const EvalOptions& opts = {});

} // namespace f2a
