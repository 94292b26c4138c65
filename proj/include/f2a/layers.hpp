#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "f2a/rng.hpp"
#include "f2a/tensor.hpp"

namespace f2a {

// 2-D convolution, im2col + sgemm. Weights are [out_ch, in_ch, k, k], bias
// [out_ch]. Layers hold parameters only; activations live in caller-owned
// caches so forward passes on shared frozen parameters are const.
struct Conv2d {
    int in_ch = 0, out_ch = 0, k = 3, stride = 1, pad = 1;
    Tensor w, b;

    Conv2d() = default;
    Conv2d(int in, int out, int kernel, int stride_, int pad_);

    void init_gaussian(Rng& rng, float stddev);

    std::pair<int, int> out_dims(int h, int w) const {
        return {(h + 2 * pad - k) / stride + 1, (w + 2 * pad - k) / stride + 1};
    }

    Tensor forward(const Tensor& x) const;
    // dy is the gradient at the output; x must be the forward input.
    // gw/gb are accumulated into when non-null; dx computed when need_dx.
    Tensor backward(const Tensor& x, const Tensor& dy, Tensor* gw, Tensor* gb,
                    bool need_dx) const;
};

Tensor relu(const Tensor& x);
Tensor relu_backward(const Tensor& y, const Tensor& dy); // y = forward output

Tensor leaky_relu(const Tensor& x, float slope);
Tensor leaky_relu_backward(const Tensor& y, const Tensor& dy, float slope);

Tensor sigmoid_fw(const Tensor& x);
Tensor sigmoid_backward(const Tensor& y, const Tensor& dy);

// 2x2 max pooling, stride 2; spatial dims must be even. argmax records the
// flat input index chosen per output element.
Tensor maxpool2(const Tensor& x, std::vector<std::int32_t>& argmax);
Tensor maxpool2_backward(const Tensor& dy, const std::vector<std::int32_t>& argmax,
                         int in_h, int in_w);

Tensor upsample_nearest2(const Tensor& x);
Tensor upsample_nearest2_backward(const Tensor& dy);

// Per-(sample, channel) normalization without learnable affine, eps 1e-5.
struct InstanceNormCache {
    Tensor y;                    // normalized output
    std::vector<float> inv_std;  // one per (n, c) plane
};
Tensor instance_norm(const Tensor& x, InstanceNormCache* cache);
Tensor instance_norm_backward(const InstanceNormCache& cache, const Tensor& dy);

Tensor concat_channels(const Tensor& a, const Tensor& b);
void split_channels(const Tensor& dy, int c_a, Tensor& da, Tensor& db);

} // namespace f2a
