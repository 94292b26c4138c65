#pragma once

#include <cstddef>
#include <vector>

#include "f2a/errors.hpp"
#include "f2a/image.hpp"

namespace f2a {

// Dense float32 NCHW tensor; the workhorse of the network stack.
struct Tensor {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<float> v;

    Tensor() = default;
    Tensor(int n_, int c_, int h_, int w_, float fill = 0.0f)
        : n(n_), c(c_), h(h_), w(w_),
          v(static_cast<std::size_t>(n_) * c_ * h_ * w_, fill) {}

    static Tensor zeros_like(const Tensor& t) { return Tensor(t.n, t.c, t.h, t.w); }

    std::size_t size() const { return v.size(); }
    float* data() { return v.data(); }
    const float* data() const { return v.data(); }

    float& at(int in, int ic, int ih, int iw) {
        return v[((static_cast<std::size_t>(in) * c + ic) * h + ih) * w + iw];
    }
    float at(int in, int ic, int ih, int iw) const {
        return v[((static_cast<std::size_t>(in) * c + ic) * h + ih) * w + iw];
    }

    bool same_shape(const Tensor& o) const {
        return n == o.n && c == o.c && h == o.h && w == o.w;
    }
    void zero() { std::fill(v.begin(), v.end(), 0.0f); }
};

// HWC [0,1] image batch -> NCHW float tensor.
Tensor images_to_tensor(const std::vector<Image>& batch);
// Single-sample helpers.
Tensor image_to_tensor(const Image& img);
Image tensor_to_image(const Tensor& t, int sample);

// Attention maps -> [N,1,H,W] tensor.
Tensor maps_to_tensor(const std::vector<AttentionMap>& maps);

// out(n,c,h,w) = x(n,c,h,w) * mask(n,0,h,w). Same function applies the mask
// to gradients flowing back through the masking step.
Tensor apply_mask(const Tensor& x, const Tensor& mask);

// y += x (shapes must match).
void add_inplace(Tensor& y, const Tensor& x);

// y += alpha * x (shapes must match).
void axpy_inplace(Tensor& y, double alpha, const Tensor& x);

} // namespace f2a
