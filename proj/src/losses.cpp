#include "f2a/losses.hpp"

#include <cmath>
#include <string>

#include "f2a/errors.hpp"

namespace f2a {

namespace {

double softplus(double x) {
    // log(1 + e^x) without overflow on either tail.
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw NumericError(std::string(what) + ": non-finite score");
}

void require_nonempty(std::size_t n, const char* what) {
    if (n == 0) throw NumericError(std::string(what) + ": empty score grid");
}

} // namespace

PatchScores PatchScores::from_logits(std::vector<double> logits, int n, int h, int w) {
    if (logits.size() != static_cast<std::size_t>(n) * h * w)
        throw ShapeError("PatchScores: logit count does not match n*h*w");
    require_finite(logits, "PatchScores");
    PatchScores s;
    s.n = n;
    s.h = h;
    s.w = w;
    s.logits = std::move(logits);
    return s;
}

PatchScores PatchScores::from_probabilities(const std::vector<double>& probs, int n,
                                            int h, int w) {
    std::vector<double> logits(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double p = probs[i];
        if (!std::isfinite(p) || p <= 0.0 || p >= 1.0)
            throw NumericError("PatchScores: probability outside (0,1)");
        logits[i] = std::log(p) - std::log1p(-p);
    }
    return from_logits(std::move(logits), n, h, w);
}

PatchScores PatchScores::from_logit_tensor(const Tensor& t) {
    if (t.c != 1) throw ShapeError("PatchScores: logit tensor must have one channel");
    std::vector<double> logits(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) logits[i] = t.v[i];
    return from_logits(std::move(logits), t.n, t.h, t.w);
}

std::vector<double> PatchScores::probabilities() const {
    std::vector<double> p(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) p[i] = sigmoid(logits[i]);
    return p;
}

double reconstruction_loss(const Image& ambient_masked, const Image& output_masked) {
    if (!ambient_masked.same_shape(output_masked))
        throw InvalidPairError("reconstruction_loss: image dimensions differ");
    double acc = 0.0;
    const std::size_t n = ambient_masked.size();
    for (std::size_t i = 0; i < n; ++i)
        acc += std::abs(ambient_masked.data()[i] - output_masked.data()[i]);
    return acc / static_cast<double>(n);
}

double discriminator_loss(const PatchScores& d_real, const PatchScores& d_fake) {
    require_nonempty(d_real.count(), "discriminator_loss(real)");
    require_nonempty(d_fake.count(), "discriminator_loss(fake)");
    double real_acc = 0.0, fake_acc = 0.0;
    for (double z : d_real.logits) real_acc += softplus(-z); // -log D(real)
    for (double z : d_fake.logits) fake_acc += softplus(z);  // -log(1 - D(fake))
    return real_acc / static_cast<double>(d_real.count()) +
           fake_acc / static_cast<double>(d_fake.count());
}

double generator_adversarial_loss(const PatchScores& d_fake) {
    require_nonempty(d_fake.count(), "generator_adversarial_loss");
    double acc = 0.0;
    for (double z : d_fake.logits) acc += softplus(-z); // -log D(fake)
    return acc / static_cast<double>(d_fake.count());
}

double total_generator_loss(double rec, double adv_g, double lambda) {
    if (lambda < 0.0) throw NumericError("total_generator_loss: lambda must be >= 0");
    return rec + lambda * adv_g;
}

double l1_mean_loss_grad(const Tensor& target, const Tensor& out, Tensor& grad_out) {
    if (!target.same_shape(out))
        throw InvalidPairError("l1_mean_loss_grad: shape mismatch");
    grad_out = Tensor::zeros_like(out);
    const std::size_t n = out.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(out.v[i]) - static_cast<double>(target.v[i]);
        acc += std::abs(d);
        grad_out.v[i] = d > 0.0 ? static_cast<float>(inv_n)
                                : (d < 0.0 ? static_cast<float>(-inv_n) : 0.0f);
    }
    return acc * inv_n;
}

double discriminator_loss_grad(const Tensor& logits_real, const Tensor& logits_fake,
                               Tensor& grad_real, Tensor& grad_fake) {
    grad_real = Tensor::zeros_like(logits_real);
    grad_fake = Tensor::zeros_like(logits_fake);
    const std::size_t nr = logits_real.size(), nf = logits_fake.size();
    require_nonempty(nr, "discriminator_loss_grad(real)");
    require_nonempty(nf, "discriminator_loss_grad(fake)");
    double real_acc = 0.0, fake_acc = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
        const double z = logits_real.v[i];
        if (!std::isfinite(z)) throw NumericError("discriminator_loss_grad: non-finite logit");
        real_acc += softplus(-z);
        grad_real.v[i] = static_cast<float>((sigmoid(z) - 1.0) / static_cast<double>(nr));
    }
    for (std::size_t i = 0; i < nf; ++i) {
        const double z = logits_fake.v[i];
        if (!std::isfinite(z)) throw NumericError("discriminator_loss_grad: non-finite logit");
        fake_acc += softplus(z);
        grad_fake.v[i] = static_cast<float>(sigmoid(z) / static_cast<double>(nf));
    }
    return real_acc / static_cast<double>(nr) + fake_acc / static_cast<double>(nf);
}

double generator_adversarial_loss_grad(const Tensor& logits_fake, Tensor& grad_fake) {
    grad_fake = Tensor::zeros_like(logits_fake);
    const std::size_t n = logits_fake.size();
    require_nonempty(n, "generator_adversarial_loss_grad");
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = logits_fake.v[i];
        if (!std::isfinite(z)) throw NumericError("generator_adversarial_loss_grad: non-finite logit");
        acc += softplus(-z);
        grad_fake.v[i] = static_cast<float>((sigmoid(z) - 1.0) / static_cast<double>(n));
    }
    return acc / static_cast<double>(n);
}

} // namespace f2a
