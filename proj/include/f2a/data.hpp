#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "f2a/image.hpp"

namespace f2a {

inline const std::vector<std::string> kCategories = {
    "People", "Shelves", "Plants", "Toys", "Rooms", "Objects"};

struct ManifestEntry {
    std::string pair_id;
    std::string flash_path;   // resolved relative to the manifest directory
    std::string ambient_path;
    std::string category;
    std::string split; // "train" or "test"
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    std::string base_dir;

    int count(const std::string& split) const;
    std::vector<std::size_t> split_indices(const std::string& split) const;
};

// Line format, whitespace separated:
//   pair_id flash_path ambient_path category split
// Blank lines and lines starting with '#' are ignored. Parse failures name
// the line number; files that do not exist are collected and reported in one
// error. Split counts are logged on success.
DatasetManifest load_manifest(const std::string& path);

struct TrainingSample {
    Image flash_crop;
    Image ambient_crop;
    AttentionMap attention; // attention_map(ambient_crop, flash_crop), post-crop
    std::string pair_id;
    PairedAugmentation augmentation;
};

// Augmentation seed for (seed, epoch, index); index is the dataset position,
// not the shuffled position, so resume reconstructs the same stream.
std::uint64_t sample_seed(std::uint64_t seed, std::int64_t epoch, std::size_t index);

TrainingSample assemble_sample(const Image& flash, const Image& ambient,
                               const std::string& pair_id,
                               const PairedAugmentation& aug);

// Loads the pair, optionally resizes to the canonical evaluation size, draws
// the augmentation from (seed, epoch, index), crops/flips both images
// identically, and computes the attention map on the cropped pair.
TrainingSample make_training_sample(const ManifestEntry& entry,
                                    std::uint64_t seed, std::int64_t epoch,
                                    std::size_t index, int crop,
                                    bool canonical_resize);

// Fisher-Yates order of [0, n) for one epoch, derived from (seed, epoch).
std::vector<std::size_t> epoch_permutation(std::size_t n, std::uint64_t seed,
                                           std::int64_t epoch);

struct SynthSceneSpec {
    std::uint64_t seed = 0;
    int height = 240;
    int width = 320;
    int shadow_polygons = 2;
    bool flash_falloff = true;
    double flash_center_gain = 1.9;
    double flash_edge_gain = 0.55;
    double flash_sigma = 0.45; // falloff width, fraction of the half-diagonal
    double noise_level = 0.0;
};

// Ambient: smooth sum of random sinusoids in [0.2, 0.85]. Flash: ambient
// under a center-weighted radial gain (clipped highlights in the middle, dim
// edges) with dark triangular shadow regions. shadow_centroids, when given,
// receives one interior point per shadow polygon.
std::pair<Image, Image> synth_pair(
    const SynthSceneSpec& spec,
    std::vector<std::array<double, 2>>* shadow_centroids = nullptr);

// Writes n_train + n_test PNG pairs plus a manifest; returns the manifest
// path. Pair seeds derive from base.seed, the split, and the index.
std::string write_synth_dataset(const std::string& dir, int n_train, int n_test,
                                const SynthSceneSpec& base);

} // namespace f2a
