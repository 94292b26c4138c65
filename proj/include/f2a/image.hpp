#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "f2a/errors.hpp"

namespace f2a {

// Canonical working resolution: long side 320, short side 240 (landscape
// frames become 320 wide x 240 tall, portrait frames 240 wide x 320 tall).
inline constexpr int kCanonicalLong = 320;
inline constexpr int kCanonicalShort = 240;

// Default square crop used for training.
inline constexpr int kDefaultCrop = 224;

// Interleaved HWC image with values in [0,1]. Index order: at(i, j, k) is
// row i, column j, channel k.
class Image {
public:
    Image() = default;
    Image(int height, int width, int channels, double fill = 0.0);

    static Image constant(int height, int width, int channels, double value) {
        return Image(height, width, channels, value);
    }

    int height() const { return height_; }
    int width() const { return width_; }
    int channels() const { return channels_; }
    std::size_t size() const { return data_.size(); }

    double& at(int i, int j, int k) {
        return data_[(static_cast<std::size_t>(i) * width_ + j) * channels_ + k];
    }
    double at(int i, int j, int k) const {
        return data_[(static_cast<std::size_t>(i) * width_ + j) * channels_ + k];
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const Image& other) const {
        return height_ == other.height_ && width_ == other.width_ &&
               channels_ == other.channels_;
    }

    void clamp01();

    // True when every element is finite and inside [0,1] up to `eps` slack.
    bool in_range(double eps = 0.0) const;

private:
    int height_ = 0;
    int width_ = 0;
    int channels_ = 0;
    std::vector<double> data_;
};

// Per-pixel weight map in [0,1], one value per spatial position.
class AttentionMap {
public:
    AttentionMap() = default;
    AttentionMap(int height, int width, double fill = 0.0);

    int height() const { return height_; }
    int width() const { return width_; }

    double& at(int i, int j) {
        return data_[static_cast<std::size_t>(i) * width_ + j];
    }
    double at(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * width_ + j];
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<double> data_;
};

// Geometry record for one augmentation draw. The same record is applied to
// both images of a pair, which keeps them aligned by construction.
struct PairedAugmentation {
    int crop_row = 0;
    int crop_col = 0;
    int crop_size = kDefaultCrop;
    bool hflip = false;
    std::uint64_t rng_seed = 0;

    // Samples a crop origin uniformly over the valid lattice and a fair flip
    // bit, all from `seed`.
    static PairedAugmentation draw(std::uint64_t seed, int height, int width,
                                   int crop_size);
};

// M(i,j) = 1 - mean_k |ambient(i,j,k) - flash(i,j,k)|, clamped to [0,1].
// Inputs must match in shape and sit in [0,1] (a 1e-6 slack absorbs
// interpolation round-off); violations throw InvalidPairError / RangeError.
AttentionMap attention_map(const Image& ambient, const Image& flash);

// out(i,j,k) = img(i,j,k) * map(i,j); the map is broadcast over channels.
Image apply_attention(const Image& img, const AttentionMap& map);

// Bilinear resize with half-pixel centers, no anti-alias prefilter.
Image resize_bilinear(const Image& img, int out_height, int out_width);

// Landscape frames (width >= height) to 320x240, portrait to 240x320.
Image resize_canonical(const Image& img);

Image crop(const Image& img, int row, int col, int height, int width);
Image hflip(const Image& img);
AttentionMap crop(const AttentionMap& map, int row, int col, int height, int width);
AttentionMap hflip(const AttentionMap& map);

// Applies the same crop + flip to both images. Throws InvalidPairError on
// shape mismatch and AugmentationError when the crop does not fit.
std::pair<Image, Image> paired_augment(const Image& flash, const Image& ambient,
                                       const PairedAugmentation& aug);

// Reflect-padding (mirror without edge repeat) up to the next multiple of
// `multiple` in each spatial dim; `top`/`left` record the placement so the
// result can be cropped back.
struct PadInfo {
    int top = 0;
    int left = 0;
    int orig_height = 0;
    int orig_width = 0;
};
Image pad_reflect_to_multiple(const Image& img, int multiple, PadInfo& info);
Image crop_back(const Image& img, const PadInfo& info);

} // namespace f2a
