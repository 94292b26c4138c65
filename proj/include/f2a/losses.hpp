#pragma once

#include <vector>

#include "f2a/image.hpp"
#include "f2a/tensor.hpp"

namespace f2a {

// Grid of discriminator patch scores. Stored as logits; the public
// semantics are probabilities sigmoid(logit) in (0,1). Keeping logits lets
// the loss formulas run through softplus, which never evaluates log(0).
struct PatchScores {
    int n = 0, h = 0, w = 0;
    std::vector<double> logits;

    static PatchScores from_logits(std::vector<double> logits, int n, int h, int w);
    // Probabilities must lie strictly inside (0,1).
    static PatchScores from_probabilities(const std::vector<double>& probs, int n,
                                          int h, int w);
    static PatchScores from_logit_tensor(const Tensor& t);

    std::vector<double> probabilities() const;
    std::size_t count() const { return logits.size(); }
};

// Mean absolute difference over all elements; inputs are expected to have
// been attention-masked already when the guided objective is in use.
double reconstruction_loss(const Image& ambient_masked, const Image& output_masked);

// -mean(log D(real)) - mean(log(1 - D(fake))): the adversarial objective as
// a minimized discriminator loss.
double discriminator_loss(const PatchScores& d_real, const PatchScores& d_fake);

// Non-saturating generator term: -mean(log D(fake)).
double generator_adversarial_loss(const PatchScores& d_fake);

// rec + lambda * adv_g.
double total_generator_loss(double rec, double adv_g, double lambda);

// Per-step loss record appended to the training log.
struct LossBreakdown {
    double reconstruction = 0.0;
    double adversarial_d = 0.0;
    double adversarial_g = 0.0;
    double total_g = 0.0;
    double lambda = 0.0;
};

// --- gradient-producing variants used by the trainer -----------------------
// All of these accumulate in double and return the loss value; gradients are
// written w.r.t. the tensor arguments noted below.

// Mean-L1 between target and out; grad_out receives d/d(out).
double l1_mean_loss_grad(const Tensor& target, const Tensor& out, Tensor& grad_out);

// Discriminator loss from logit tensors; gradients w.r.t. each logit tensor.
double discriminator_loss_grad(const Tensor& logits_real, const Tensor& logits_fake,
                               Tensor& grad_real, Tensor& grad_fake);

// Generator adversarial loss from fake logits; gradient w.r.t. the logits.
double generator_adversarial_loss_grad(const Tensor& logits_fake, Tensor& grad_fake);

} // namespace f2a
