#include "f2a/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "f2a/errors.hpp"

namespace f2a {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01; // (K1*L)^2, L = 1
constexpr double kC2 = 0.03 * 0.03; // (K2*L)^2

void require_same_shape(const Image& a, const Image& b, const char* op) {
    if (!a.same_shape(b))
        throw InvalidPairError(std::string(op) + ": image dimensions differ");
}

std::array<double, kWindow> gaussian_window() {
    std::array<double, kWindow> w{};
    double sum = 0.0;
    const int r = kWindow / 2;
    for (int i = 0; i < kWindow; ++i) {
        const double d = i - r;
        w[i] = std::exp(-0.5 * d * d / (kSigma * kSigma));
        sum += w[i];
    }
    for (double& v : w) v /= sum;
    return w;
}

// Valid-region separable Gaussian filtering of a single plane.
// in: h x w, out: (h-10) x (w-10).
void filter_valid(const std::vector<double>& in, int h, int w,
                  const std::array<double, kWindow>& win,
                  std::vector<double>& tmp, std::vector<double>& out) {
    const int wo = w - kWindow + 1;
    const int ho = h - kWindow + 1;
    tmp.assign(static_cast<std::size_t>(h) * wo, 0.0);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < wo; ++j) {
            double acc = 0.0;
            const double* row = &in[static_cast<std::size_t>(i) * w + j];
            for (int t = 0; t < kWindow; ++t) acc += win[t] * row[t];
            tmp[static_cast<std::size_t>(i) * wo + j] = acc;
        }
    out.assign(static_cast<std::size_t>(ho) * wo, 0.0);
    for (int i = 0; i < ho; ++i)
        for (int j = 0; j < wo; ++j) {
            double acc = 0.0;
            for (int t = 0; t < kWindow; ++t)
                acc += win[t] * tmp[static_cast<std::size_t>(i + t) * wo + j];
            out[static_cast<std::size_t>(i) * wo + j] = acc;
        }
}

} // namespace

double psnr(const Image& reference, const Image& candidate) {
    require_same_shape(reference, candidate, "psnr");
    double se = 0.0;
    const std::size_t n = reference.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = reference.data()[i] - candidate.data()[i];
        se += d * d;
    }
    const double mse = se / static_cast<double>(n);
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

double ssim(const Image& reference, const Image& candidate) {
    require_same_shape(reference, candidate, "ssim");
    if (reference.height() < kWindow || reference.width() < kWindow)
        throw InvalidPairError("ssim: images smaller than the 11x11 window");

    static const std::array<double, kWindow> win = gaussian_window();
    const int h = reference.height(), w = reference.width(), c = reference.channels();
    const std::size_t plane_n = static_cast<std::size_t>(h) * w;

    std::vector<double> x(plane_n), y(plane_n), xx(plane_n), yy(plane_n), xy(plane_n);
    std::vector<double> tmp, mu_x, mu_y, m_xx, m_yy, m_xy;

    double channel_sum = 0.0;
    for (int k = 0; k < c; ++k) {
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < w; ++j) {
                const std::size_t p = static_cast<std::size_t>(i) * w + j;
                x[p] = reference.at(i, j, k);
                y[p] = candidate.at(i, j, k);
                xx[p] = x[p] * x[p];
                yy[p] = y[p] * y[p];
                xy[p] = x[p] * y[p];
            }
        filter_valid(x, h, w, win, tmp, mu_x);
        filter_valid(y, h, w, win, tmp, mu_y);
        filter_valid(xx, h, w, win, tmp, m_xx);
        filter_valid(yy, h, w, win, tmp, m_yy);
        filter_valid(xy, h, w, win, tmp, m_xy);

        double acc = 0.0;
        for (std::size_t p = 0; p < mu_x.size(); ++p) {
            const double mx = mu_x[p], my = mu_y[p];
            const double sx = m_xx[p] - mx * mx;
            const double sy = m_yy[p] - my * my;
            const double sxy = m_xy[p] - mx * my;
            acc += ((2.0 * mx * my + kC1) * (2.0 * sxy + kC2)) /
                   ((mx * mx + my * my + kC1) * (sx + sy + kC2));
        }
        channel_sum += acc / static_cast<double>(mu_x.size());
    }
    return channel_sum / c;
}

} // namespace f2a
