#include "f2a/tensor.hpp"

#include <algorithm>

namespace f2a {

Tensor images_to_tensor(const std::vector<Image>& batch) {
    if (batch.empty()) throw ShapeError("images_to_tensor: empty batch");
    const Image& first = batch.front();
    Tensor t(static_cast<int>(batch.size()), first.channels(), first.height(),
             first.width());
    for (std::size_t s = 0; s < batch.size(); ++s) {
        const Image& img = batch[s];
        if (!img.same_shape(first))
            throw ShapeError("images_to_tensor: mixed shapes in batch");
        for (int k = 0; k < img.channels(); ++k)
            for (int i = 0; i < img.height(); ++i)
                for (int j = 0; j < img.width(); ++j)
                    t.at(static_cast<int>(s), k, i, j) =
                        static_cast<float>(img.at(i, j, k));
    }
    return t;
}

Tensor image_to_tensor(const Image& img) {
    return images_to_tensor({img});
}

Image tensor_to_image(const Tensor& t, int sample) {
    Image img(t.h, t.w, t.c);
    for (int k = 0; k < t.c; ++k)
        for (int i = 0; i < t.h; ++i)
            for (int j = 0; j < t.w; ++j)
                img.at(i, j, k) = static_cast<double>(t.at(sample, k, i, j));
    return img;
}

Tensor maps_to_tensor(const std::vector<AttentionMap>& maps) {
    if (maps.empty()) throw ShapeError("maps_to_tensor: empty batch");
    Tensor t(static_cast<int>(maps.size()), 1, maps.front().height(),
             maps.front().width());
    for (std::size_t s = 0; s < maps.size(); ++s) {
        const AttentionMap& m = maps[s];
        if (m.height() != t.h || m.width() != t.w)
            throw ShapeError("maps_to_tensor: mixed shapes in batch");
        for (int i = 0; i < t.h; ++i)
            for (int j = 0; j < t.w; ++j)
                t.at(static_cast<int>(s), 0, i, j) = static_cast<float>(m.at(i, j));
    }
    return t;
}

Tensor apply_mask(const Tensor& x, const Tensor& mask) {
    if (mask.n != x.n || mask.c != 1 || mask.h != x.h || mask.w != x.w)
        throw ShapeError("apply_mask: mask shape must be [N,1,H,W] matching x");
    Tensor out = x;
    const std::size_t plane = static_cast<std::size_t>(x.h) * x.w;
    for (int in = 0; in < x.n; ++in) {
        const float* m = mask.data() + static_cast<std::size_t>(in) * plane;
        for (int ic = 0; ic < x.c; ++ic) {
            float* p = out.data() + ((static_cast<std::size_t>(in) * x.c + ic) * plane);
            for (std::size_t i = 0; i < plane; ++i) p[i] *= m[i];
        }
    }
    return out;
}

void add_inplace(Tensor& y, const Tensor& x) {
    if (!y.same_shape(x)) throw ShapeError("add_inplace: shape mismatch");
    for (std::size_t i = 0; i < y.size(); ++i) y.v[i] += x.v[i];
}

void axpy_inplace(Tensor& y, double alpha, const Tensor& x) {
    if (!y.same_shape(x)) throw ShapeError("axpy_inplace: shape mismatch");
    for (std::size_t i = 0; i < y.size(); ++i)
        y.v[i] = static_cast<float>(y.v[i] + alpha * x.v[i]);
}

} // namespace f2a
