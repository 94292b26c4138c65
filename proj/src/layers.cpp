#include "f2a/layers.hpp"

#include <algorithm>
#include <cblas.h>
#include <cmath>
#include <cstring>

#include "f2a/errors.hpp"

namespace f2a {

namespace {

// Scratch buffers grow monotonically and are reused across calls.
thread_local std::vector<float> g_col;
thread_local std::vector<float> g_dcol;

float* scratch(std::vector<float>& buf, std::size_t n) {
    if (buf.size() < n) buf.resize(n);
    return buf.data();
}

// Column layout: row ((ic*k + ki)*k + kj), column (oh*wo + ow).
void im2col(const float* x, int c, int h, int w, int k, int s, int p,
            float* col, int ho, int wo) {
    for (int ic = 0; ic < c; ++ic) {
        for (int ki = 0; ki < k; ++ki) {
            for (int kj = 0; kj < k; ++kj) {
                float* row = col + (static_cast<std::size_t>((ic * k + ki) * k + kj)) *
                                       (static_cast<std::size_t>(ho) * wo);
                // Valid ow range: 0 <= ow*s - p + kj < w.
                int lo = std::max(0, (p - kj + s - 1) / s);
                int hi = std::min(wo, (w + p - kj + s - 1) / s);
                for (int oh = 0; oh < ho; ++oh) {
                    float* dst = row + static_cast<std::size_t>(oh) * wo;
                    const int ih = oh * s - p + ki;
                    if (ih < 0 || ih >= h) {
                        std::memset(dst, 0, sizeof(float) * wo);
                        continue;
                    }
                    const float* src = x + (static_cast<std::size_t>(ic) * h + ih) * w;
                    if (lo > 0) std::memset(dst, 0, sizeof(float) * lo);
                    if (hi < wo) std::memset(dst + hi, 0, sizeof(float) * (wo - hi));
                    if (s == 1) {
                        if (hi > lo)
                            std::memcpy(dst + lo, src + lo - p + kj,
                                        sizeof(float) * (hi - lo));
                    } else {
                        for (int ow = lo; ow < hi; ++ow)
                            dst[ow] = src[ow * s - p + kj];
                    }
                }
            }
        }
    }
}

void col2im(const float* col, int c, int h, int w, int k, int s, int p,
            float* x, int ho, int wo) {
    for (int ic = 0; ic < c; ++ic) {
        for (int ki = 0; ki < k; ++ki) {
            for (int kj = 0; kj < k; ++kj) {
                const float* row = col + (static_cast<std::size_t>((ic * k + ki) * k + kj)) *
                                             (static_cast<std::size_t>(ho) * wo);
                int lo = std::max(0, (p - kj + s - 1) / s);
                int hi = std::min(wo, (w + p - kj + s - 1) / s);
                for (int oh = 0; oh < ho; ++oh) {
                    const int ih = oh * s - p + ki;
                    if (ih < 0 || ih >= h) continue;
                    const float* src = row + static_cast<std::size_t>(oh) * wo;
                    float* dst = x + (static_cast<std::size_t>(ic) * h + ih) * w;
                    for (int ow = lo; ow < hi; ++ow)
                        dst[ow * s - p + kj] += src[ow];
                }
            }
        }
    }
}

} // namespace

Conv2d::Conv2d(int in, int out, int kernel, int stride_, int pad_)
    : in_ch(in), out_ch(out), k(kernel), stride(stride_), pad(pad_),
      w(out, in, kernel, kernel), b(1, out, 1, 1) {}

void Conv2d::init_gaussian(Rng& rng, float stddev) {
    for (auto& v : w.v) v = static_cast<float>(rng.normal() * stddev);
    b.zero();
}

Tensor Conv2d::forward(const Tensor& x) const {
    if (x.c != in_ch)
        throw ShapeError("conv input has " + std::to_string(x.c) +
                         " channels, expected " + std::to_string(in_ch));
    auto [ho, wo] = out_dims(x.h, x.w);
    if (ho <= 0 || wo <= 0)
        throw ShapeError("conv input " + std::to_string(x.h) + "x" +
                         std::to_string(x.w) + " too small for kernel");
    Tensor y(x.n, out_ch, ho, wo);
    const std::size_t kk = static_cast<std::size_t>(in_ch) * k * k;
    const std::size_t how = static_cast<std::size_t>(ho) * wo;
    float* col = scratch(g_col, kk * how);
    for (int n = 0; n < x.n; ++n) {
        im2col(x.v.data() + static_cast<std::size_t>(n) * x.c * x.h * x.w,
               x.c, x.h, x.w, k, stride, pad, col, ho, wo);
        cblas_sgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans,
                    out_ch, static_cast<int>(how), static_cast<int>(kk),
                    1.0f, w.v.data(), static_cast<int>(kk), col,
                    static_cast<int>(how), 0.0f,
                    y.v.data() + static_cast<std::size_t>(n) * out_ch * how,
                    static_cast<int>(how));
        for (int oc = 0; oc < out_ch; ++oc) {
            float* rowp = y.v.data() + (static_cast<std::size_t>(n) * out_ch + oc) * how;
            const float bias = b.v[static_cast<std::size_t>(oc)];
            for (std::size_t i = 0; i < how; ++i) rowp[i] += bias;
        }
    }
    return y;
}

Tensor Conv2d::backward(const Tensor& x, const Tensor& dy, Tensor* gw, Tensor* gb,
                        bool need_dx) const {
    auto [ho, wo] = out_dims(x.h, x.w);
    if (dy.n != x.n || dy.c != out_ch || dy.h != ho || dy.w != wo)
        throw ShapeError("conv backward: gradient shape mismatch");
    const std::size_t kk = static_cast<std::size_t>(in_ch) * k * k;
    const std::size_t how = static_cast<std::size_t>(ho) * wo;
    Tensor dx;
    if (need_dx) {
        dx = Tensor(x.n, x.c, x.h, x.w);
        dx.zero();
    }
    const bool need_col = gw != nullptr || need_dx;
    float* col = need_col ? scratch(g_col, kk * how) : nullptr;
    float* dcol = need_dx ? scratch(g_dcol, kk * how) : nullptr;
    for (int n = 0; n < x.n; ++n) {
        const float* dyp = dy.v.data() + static_cast<std::size_t>(n) * out_ch * how;
        if (gw != nullptr || need_dx) {
            im2col(x.v.data() + static_cast<std::size_t>(n) * x.c * x.h * x.w,
                   x.c, x.h, x.w, k, stride, pad, col, ho, wo);
        }
        if (gw != nullptr) {
            // gw += dy . col^T
            cblas_sgemm(CblasRowMajor, CblasNoTrans, CblasTrans,
                        out_ch, static_cast<int>(kk), static_cast<int>(how),
                        1.0f, dyp, static_cast<int>(how), col,
                        static_cast<int>(how), 1.0f, gw->v.data(),
                        static_cast<int>(kk));
        }
        if (gb != nullptr) {
            for (int oc = 0; oc < out_ch; ++oc) {
                const float* rowp = dyp + static_cast<std::size_t>(oc) * how;
                double s = 0.0;
                for (std::size_t i = 0; i < how; ++i) s += rowp[i];
                gb->v[static_cast<std::size_t>(oc)] += static_cast<float>(s);
            }
        }
        if (need_dx) {
            // dcol = W^T . dy, then scatter back to input layout.
            cblas_sgemm(CblasRowMajor, CblasTrans, CblasNoTrans,
                        static_cast<int>(kk), static_cast<int>(how), out_ch,
                        1.0f, w.v.data(), static_cast<int>(kk), dyp,
                        static_cast<int>(how), 0.0f, dcol,
                        static_cast<int>(how));
            col2im(dcol, x.c, x.h, x.w, k, stride, pad,
                   dx.v.data() + static_cast<std::size_t>(n) * x.c * x.h * x.w,
                   ho, wo);
        }
    }
    return dx;
}

Tensor relu(const Tensor& x) {
    Tensor y = x;
    for (auto& v : y.v) v = v > 0.0f ? v : 0.0f;
    return y;
}

Tensor relu_backward(const Tensor& y, const Tensor& dy) {
    Tensor dx = dy;
    for (std::size_t i = 0; i < dx.v.size(); ++i)
        if (y.v[i] <= 0.0f) dx.v[i] = 0.0f;
    return dx;
}

Tensor leaky_relu(const Tensor& x, float slope) {
    Tensor y = x;
    for (auto& v : y.v) v = v > 0.0f ? v : slope * v;
    return y;
}

Tensor leaky_relu_backward(const Tensor& y, const Tensor& dy, float slope) {
    // Output sign matches input sign for slope > 0, so y suffices as cache.
    Tensor dx = dy;
    for (std::size_t i = 0; i < dx.v.size(); ++i)
        if (y.v[i] <= 0.0f) dx.v[i] *= slope;
    return dx;
}

Tensor sigmoid_fw(const Tensor& x) {
    Tensor y = x;
    for (auto& v : y.v) {
        if (v >= 0.0f) {
            const float e = std::exp(-v);
            v = 1.0f / (1.0f + e);
        } else {
            const float e = std::exp(v);
            v = e / (1.0f + e);
        }
    }
    return y;
}

Tensor sigmoid_backward(const Tensor& y, const Tensor& dy) {
    Tensor dx = dy;
    for (std::size_t i = 0; i < dx.v.size(); ++i)
        dx.v[i] *= y.v[i] * (1.0f - y.v[i]);
    return dx;
}

Tensor maxpool2(const Tensor& x, std::vector<std::int32_t>& argmax) {
    if (x.h % 2 != 0 || x.w % 2 != 0)
        throw ShapeError("maxpool2 requires even spatial dims, got " +
                         std::to_string(x.h) + "x" + std::to_string(x.w));
    const int ho = x.h / 2, wo = x.w / 2;
    Tensor y(x.n, x.c, ho, wo);
    argmax.assign(y.v.size(), 0);
    const std::size_t planes = static_cast<std::size_t>(x.n) * x.c;
    for (std::size_t p = 0; p < planes; ++p) {
        const float* xp = x.v.data() + p * x.h * x.w;
        float* yp = y.v.data() + p * ho * wo;
        std::int32_t* ap = argmax.data() + p * ho * wo;
        for (int oh = 0; oh < ho; ++oh) {
            for (int ow = 0; ow < wo; ++ow) {
                const int base = (2 * oh) * x.w + 2 * ow;
                int best = base;
                float bv = xp[base];
                const int cands[3] = {base + 1, base + x.w, base + x.w + 1};
                for (int cand : cands) {
                    if (xp[cand] > bv) { bv = xp[cand]; best = cand; }
                }
                yp[oh * wo + ow] = bv;
                ap[oh * wo + ow] = best;
            }
        }
    }
    return y;
}

Tensor maxpool2_backward(const Tensor& dy, const std::vector<std::int32_t>& argmax,
                         int in_h, int in_w) {
    Tensor dx(dy.n, dy.c, in_h, in_w);
    dx.zero();
    const std::size_t planes = static_cast<std::size_t>(dy.n) * dy.c;
    const std::size_t how = static_cast<std::size_t>(dy.h) * dy.w;
    for (std::size_t p = 0; p < planes; ++p) {
        const float* dyp = dy.v.data() + p * how;
        const std::int32_t* ap = argmax.data() + p * how;
        float* dxp = dx.v.data() + p * static_cast<std::size_t>(in_h) * in_w;
        for (std::size_t i = 0; i < how; ++i) dxp[ap[i]] += dyp[i];
    }
    return dx;
}

Tensor upsample_nearest2(const Tensor& x) {
    Tensor y(x.n, x.c, 2 * x.h, 2 * x.w);
    const std::size_t planes = static_cast<std::size_t>(x.n) * x.c;
    for (std::size_t p = 0; p < planes; ++p) {
        const float* xp = x.v.data() + p * x.h * x.w;
        float* yp = y.v.data() + p * static_cast<std::size_t>(4) * x.h * x.w;
        for (int i = 0; i < x.h; ++i) {
            float* r0 = yp + (2 * i) * (2 * x.w);
            for (int j = 0; j < x.w; ++j) {
                const float v = xp[i * x.w + j];
                r0[2 * j] = v;
                r0[2 * j + 1] = v;
            }
            std::memcpy(r0 + 2 * x.w, r0, sizeof(float) * 2 * x.w);
        }
    }
    return y;
}

Tensor upsample_nearest2_backward(const Tensor& dy) {
    if (dy.h % 2 != 0 || dy.w % 2 != 0)
        throw ShapeError("upsample backward expects even dims");
    Tensor dx(dy.n, dy.c, dy.h / 2, dy.w / 2);
    const std::size_t planes = static_cast<std::size_t>(dy.n) * dy.c;
    for (std::size_t p = 0; p < planes; ++p) {
        const float* dyp = dy.v.data() + p * dy.h * dy.w;
        float* dxp = dx.v.data() + p * dx.h * dx.w;
        for (int i = 0; i < dx.h; ++i) {
            const float* r0 = dyp + (2 * i) * dy.w;
            const float* r1 = r0 + dy.w;
            for (int j = 0; j < dx.w; ++j)
                dxp[i * dx.w + j] =
                    r0[2 * j] + r0[2 * j + 1] + r1[2 * j] + r1[2 * j + 1];
        }
    }
    return dx;
}

Tensor instance_norm(const Tensor& x, InstanceNormCache* cache) {
    constexpr float kEps = 1e-5f;
    Tensor y(x.n, x.c, x.h, x.w);
    const std::size_t planes = static_cast<std::size_t>(x.n) * x.c;
    const std::size_t hw = static_cast<std::size_t>(x.h) * x.w;
    std::vector<float> inv_std(planes);
    for (std::size_t p = 0; p < planes; ++p) {
        const float* xp = x.v.data() + p * hw;
        float* yp = y.v.data() + p * hw;
        double sum = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < hw; ++i) {
            sum += xp[i];
            sq += static_cast<double>(xp[i]) * xp[i];
        }
        const double mean = sum / static_cast<double>(hw);
        double var = sq / static_cast<double>(hw) - mean * mean;
        if (var < 0.0) var = 0.0;
        const float is = static_cast<float>(1.0 / std::sqrt(var + kEps));
        const float mu = static_cast<float>(mean);
        inv_std[p] = is;
        for (std::size_t i = 0; i < hw; ++i) yp[i] = (xp[i] - mu) * is;
    }
    if (cache != nullptr) {
        cache->y = y;
        cache->inv_std = std::move(inv_std);
    }
    return y;
}

Tensor instance_norm_backward(const InstanceNormCache& cache, const Tensor& dy) {
    const Tensor& y = cache.y;
    if (!dy.same_shape(y)) throw ShapeError("instance_norm backward shape mismatch");
    Tensor dx(dy.n, dy.c, dy.h, dy.w);
    const std::size_t planes = static_cast<std::size_t>(dy.n) * dy.c;
    const std::size_t hw = static_cast<std::size_t>(dy.h) * dy.w;
    for (std::size_t p = 0; p < planes; ++p) {
        const float* dyp = dy.v.data() + p * hw;
        const float* yp = y.v.data() + p * hw;
        float* dxp = dx.v.data() + p * hw;
        double sdy = 0.0, sdyy = 0.0;
        for (std::size_t i = 0; i < hw; ++i) {
            sdy += dyp[i];
            sdyy += static_cast<double>(dyp[i]) * yp[i];
        }
        const float mdy = static_cast<float>(sdy / static_cast<double>(hw));
        const float mdyy = static_cast<float>(sdyy / static_cast<double>(hw));
        const float is = cache.inv_std[p];
        for (std::size_t i = 0; i < hw; ++i)
            dxp[i] = is * (dyp[i] - mdy - yp[i] * mdyy);
    }
    return dx;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
    if (a.n != b.n || a.h != b.h || a.w != b.w)
        throw ShapeError("concat_channels: spatial/batch mismatch");
    Tensor y(a.n, a.c + b.c, a.h, a.w);
    const std::size_t hw = static_cast<std::size_t>(a.h) * a.w;
    for (int n = 0; n < a.n; ++n) {
        std::memcpy(y.v.data() + static_cast<std::size_t>(n) * y.c * hw,
                    a.v.data() + static_cast<std::size_t>(n) * a.c * hw,
                    sizeof(float) * a.c * hw);
        std::memcpy(y.v.data() + (static_cast<std::size_t>(n) * y.c + a.c) * hw,
                    b.v.data() + static_cast<std::size_t>(n) * b.c * hw,
                    sizeof(float) * b.c * hw);
    }
    return y;
}

void split_channels(const Tensor& dy, int c_a, Tensor& da, Tensor& db) {
    const int c_b = dy.c - c_a;
    if (c_a <= 0 || c_b <= 0) throw ShapeError("split_channels: bad split point");
    da = Tensor(dy.n, c_a, dy.h, dy.w);
    db = Tensor(dy.n, c_b, dy.h, dy.w);
    const std::size_t hw = static_cast<std::size_t>(dy.h) * dy.w;
    for (int n = 0; n < dy.n; ++n) {
        std::memcpy(da.v.data() + static_cast<std::size_t>(n) * c_a * hw,
                    dy.v.data() + static_cast<std::size_t>(n) * dy.c * hw,
                    sizeof(float) * c_a * hw);
        std::memcpy(db.v.data() + static_cast<std::size_t>(n) * c_b * hw,
                    dy.v.data() + (static_cast<std::size_t>(n) * dy.c + c_a) * hw,
                    sizeof(float) * c_b * hw);
    }
}

} // namespace f2a
