#include "f2a/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "f2a/rng.hpp"

namespace f2a {

namespace {

// Slack for range validation: bilinear interpolation and 8-bit decoding stay
// in [0,1] exactly, but tolerate a hair of upstream round-off before erroring.
constexpr double kRangeEps = 1e-6;

void require_positive_dims(int h, int w, int c) {
    if (h < 1 || w < 1 || c < 1)
        throw InvalidPairError("image dimensions must be positive, got " +
                               std::to_string(h) + "x" + std::to_string(w) + "x" +
                               std::to_string(c));
}

void require_in_range(const Image& img, const char* which) {
    if (!img.in_range(kRangeEps))
        throw RangeError(std::string(which) +
                         " image has values outside [0,1] (or non-finite)");
}

} // namespace

Image::Image(int height, int width, int channels, double fill)
    : height_(height), width_(width), channels_(channels) {
    require_positive_dims(height, width, channels);
    data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

void Image::clamp01() {
    for (double& v : data_) v = std::clamp(v, 0.0, 1.0);
}

bool Image::in_range(double eps) const {
    for (double v : data_) {
        if (!std::isfinite(v) || v < -eps || v > 1.0 + eps) return false;
    }
    return true;
}

AttentionMap::AttentionMap(int height, int width, double fill)
    : height_(height), width_(width) {
    require_positive_dims(height, width, 1);
    data_.assign(static_cast<std::size_t>(height) * width, fill);
}

PairedAugmentation PairedAugmentation::draw(std::uint64_t seed, int height,
                                            int width, int crop_size) {
    if (crop_size > height || crop_size > width)
        throw AugmentationError("crop size " + std::to_string(crop_size) +
                                " exceeds image " + std::to_string(height) + "x" +
                                std::to_string(width));
    Rng rng(seed);
    PairedAugmentation aug;
    aug.crop_size = crop_size;
    aug.crop_row = static_cast<int>(rng.bounded(height - crop_size + 1));
    aug.crop_col = static_cast<int>(rng.bounded(width - crop_size + 1));
    aug.hflip = rng.coin();
    aug.rng_seed = seed;
    return aug;
}

AttentionMap attention_map(const Image& ambient, const Image& flash) {
    if (!ambient.same_shape(flash))
        throw InvalidPairError(
            "attention_map: ambient and flash dimensions differ (" +
            std::to_string(ambient.height()) + "x" + std::to_string(ambient.width()) +
            "x" + std::to_string(ambient.channels()) + " vs " +
            std::to_string(flash.height()) + "x" + std::to_string(flash.width()) +
            "x" + std::to_string(flash.channels()) + ")");
    require_in_range(ambient, "ambient");
    require_in_range(flash, "flash");

    const int h = ambient.height(), w = ambient.width(), c = ambient.channels();
    AttentionMap map(h, w);
    const double inv_c = 1.0 / c;
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            double acc = 0.0;
            for (int k = 0; k < c; ++k)
                acc += std::abs(ambient.at(i, j, k) - flash.at(i, j, k));
            map.at(i, j) = std::clamp(1.0 - acc * inv_c, 0.0, 1.0);
        }
    }
    return map;
}

Image apply_attention(const Image& img, const AttentionMap& map) {
    if (img.height() != map.height() || img.width() != map.width())
        throw InvalidPairError("apply_attention: map " + std::to_string(map.height()) +
                               "x" + std::to_string(map.width()) +
                               " does not match image " + std::to_string(img.height()) +
                               "x" + std::to_string(img.width()));
    Image out(img.height(), img.width(), img.channels());
    for (int i = 0; i < img.height(); ++i)
        for (int j = 0; j < img.width(); ++j) {
            const double m = map.at(i, j);
            for (int k = 0; k < img.channels(); ++k)
                out.at(i, j, k) = img.at(i, j, k) * m;
        }
    return out;
}

Image resize_bilinear(const Image& img, int out_height, int out_width) {
    require_positive_dims(out_height, out_width, img.channels());
    if (img.height() == out_height && img.width() == out_width) return img;

    Image out(out_height, out_width, img.channels());
    const double scale_y = static_cast<double>(img.height()) / out_height;
    const double scale_x = static_cast<double>(img.width()) / out_width;
    const int c = img.channels();

    for (int oy = 0; oy < out_height; ++oy) {
        double sy = (oy + 0.5) * scale_y - 0.5;
        sy = std::clamp(sy, 0.0, static_cast<double>(img.height() - 1));
        const int y0 = static_cast<int>(sy);
        const int y1 = std::min(y0 + 1, img.height() - 1);
        const double fy = sy - y0;
        for (int ox = 0; ox < out_width; ++ox) {
            double sx = (ox + 0.5) * scale_x - 0.5;
            sx = std::clamp(sx, 0.0, static_cast<double>(img.width() - 1));
            const int x0 = static_cast<int>(sx);
            const int x1 = std::min(x0 + 1, img.width() - 1);
            const double fx = sx - x0;
            for (int k = 0; k < c; ++k) {
                // Nested lerps: a constant image reproduces exactly.
                const double top = img.at(y0, x0, k) + fx * (img.at(y0, x1, k) - img.at(y0, x0, k));
                const double bot = img.at(y1, x0, k) + fx * (img.at(y1, x1, k) - img.at(y1, x0, k));
                out.at(oy, ox, k) = top + fy * (bot - top);
            }
        }
    }
    return out;
}

Image resize_canonical(const Image& img) {
    if (img.width() >= img.height())
        return resize_bilinear(img, kCanonicalShort, kCanonicalLong);
    return resize_bilinear(img, kCanonicalLong, kCanonicalShort);
}

Image crop(const Image& img, int row, int col, int height, int width) {
    if (row < 0 || col < 0 || row + height > img.height() || col + width > img.width())
        throw AugmentationError("crop at (" + std::to_string(row) + "," +
                                std::to_string(col) + ") size " + std::to_string(height) +
                                "x" + std::to_string(width) + " out of bounds for " +
                                std::to_string(img.height()) + "x" +
                                std::to_string(img.width()));
    Image out(height, width, img.channels());
    for (int i = 0; i < height; ++i)
        for (int j = 0; j < width; ++j)
            for (int k = 0; k < img.channels(); ++k)
                out.at(i, j, k) = img.at(row + i, col + j, k);
    return out;
}

Image hflip(const Image& img) {
    Image out(img.height(), img.width(), img.channels());
    for (int i = 0; i < img.height(); ++i)
        for (int j = 0; j < img.width(); ++j)
            for (int k = 0; k < img.channels(); ++k)
                out.at(i, j, k) = img.at(i, img.width() - 1 - j, k);
    return out;
}

AttentionMap crop(const AttentionMap& map, int row, int col, int height, int width) {
    if (row < 0 || col < 0 || row + height > map.height() || col + width > map.width())
        throw AugmentationError("attention crop out of bounds");
    AttentionMap out(height, width);
    for (int i = 0; i < height; ++i)
        for (int j = 0; j < width; ++j)
            out.at(i, j) = map.at(row + i, col + j);
    return out;
}

AttentionMap hflip(const AttentionMap& map) {
    AttentionMap out(map.height(), map.width());
    for (int i = 0; i < map.height(); ++i)
        for (int j = 0; j < map.width(); ++j)
            out.at(i, j) = map.at(i, map.width() - 1 - j);
    return out;
}

std::pair<Image, Image> paired_augment(const Image& flash, const Image& ambient,
                                       const PairedAugmentation& aug) {
    if (!flash.same_shape(ambient))
        throw InvalidPairError("paired_augment: flash and ambient dimensions differ");
    Image f = crop(flash, aug.crop_row, aug.crop_col, aug.crop_size, aug.crop_size);
    Image a = crop(ambient, aug.crop_row, aug.crop_col, aug.crop_size, aug.crop_size);
    if (aug.hflip) {
        f = hflip(f);
        a = hflip(a);
    }
    return {std::move(f), std::move(a)};
}

namespace {

// Mirror index without repeating the edge sample; degrades to clamping when
// the pad depth exceeds the image extent.
int reflect_index(int idx, int n) {
    if (n == 1) return 0;
    if (idx < 0) idx = -idx;
    if (idx >= n) idx = 2 * n - 2 - idx;
    return std::clamp(idx, 0, n - 1);
}

} // namespace

Image pad_reflect_to_multiple(const Image& img, int multiple, PadInfo& info) {
    const int h = img.height(), w = img.width();
    const int ph = (multiple - h % multiple) % multiple;
    const int pw = (multiple - w % multiple) % multiple;
    info.top = ph / 2;
    info.left = pw / 2;
    info.orig_height = h;
    info.orig_width = w;
    if (ph == 0 && pw == 0) return img;

    Image out(h + ph, w + pw, img.channels());
    for (int i = 0; i < out.height(); ++i) {
        const int si = reflect_index(i - info.top, h);
        for (int j = 0; j < out.width(); ++j) {
            const int sj = reflect_index(j - info.left, w);
            for (int k = 0; k < img.channels(); ++k)
                out.at(i, j, k) = img.at(si, sj, k);
        }
    }
    return out;
}

Image crop_back(const Image& img, const PadInfo& info) {
    if (img.height() == info.orig_height && img.width() == info.orig_width)
        return img;
    return crop(img, info.top, info.left, info.orig_height, info.orig_width);
}

} // namespace f2a
