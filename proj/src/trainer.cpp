#include "f2a/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "f2a/checkpoint.hpp"
#include "f2a/errors.hpp"
#include "f2a/image_io.hpp"
#include "f2a/rng.hpp"

namespace fs = std::filesystem;

namespace f2a {

namespace {

std::vector<Tensor*> param_ptrs(std::vector<ParamRef> refs) {
    std::vector<Tensor*> out;
    out.reserve(refs.size());
    for (auto& r : refs) out.push_back(r.value);
    return out;
}

GeneratorSpec generator_spec_for(const RunConfig& cfg) {
    if (cfg.ablation == Ablation::UNET_SCRATCH)
        return GeneratorSpec::unet_scratch();
    return GeneratorSpec::vgg_unet(!cfg.weights_archive.empty());
}

std::string batch_ids(const std::vector<TrainingSample>& batch) {
    std::string s;
    for (const auto& b : batch) {
        if (!s.empty()) s += ",";
        s += b.pair_id;
    }
    return s;
}

} // namespace

std::string Trainer::state_path(const RunConfig& cfg) {
    return (fs::path(cfg.output_dir) / "state_latest.nta").string();
}

Trainer::Trainer(const RunConfig& cfg, bool load_data) : cfg_(cfg) {
    for (const auto& w : cfg_.validate()) std::clog << "warning: " << w << "\n";
    if (load_data) {
        if (cfg_.manifest.empty()) throw DataError("no manifest configured");
        manifest_ = load_manifest(cfg_.manifest);
        train_entry_ = manifest_.split_indices("train");
    }
    const GeneratorSpec gs = generator_spec_for(cfg_);
    bundle_.generator = build_generator(
        gs, mix_seed(cfg_.seed, 0x67656ea5ULL),
        cfg_.weights_archive.empty()
            ? std::optional<std::string>{}
            : std::optional<std::string>{cfg_.weights_archive});
    if (cfg_.uses_discriminator())
        bundle_.discriminator = build_discriminator(DiscriminatorSpec::patch70(3),
                                                    mix_seed(cfg_.seed, 0x64697363ULL));
    bundle_.meta.seed = cfg_.seed;
    bundle_.meta.ablation = to_string(cfg_.ablation);
    ggrads_ = GeneratorGrads(bundle_.generator);
    adam_g_.init_like(param_ptrs(bundle_.generator.parameters()));
    if (bundle_.discriminator) {
        dgrads_ = DiscriminatorGrads(*bundle_.discriminator);
        adam_d_.init_like(param_ptrs(bundle_.discriminator->parameters()));
    }
}

Trainer::Trainer(const RunConfig& cfg) : Trainer(cfg, true) {}

Trainer::Trainer(const RunConfig& cfg, ModelBundle bundle) : cfg_(cfg) {
    for (const auto& w : cfg_.validate()) std::clog << "warning: " << w << "\n";
    if (cfg_.ablation == Ablation::R_ONLY && bundle.discriminator)
        throw DataError("R_ONLY forbids a discriminator");
    bundle_ = std::move(bundle);
    ggrads_ = GeneratorGrads(bundle_.generator);
    adam_g_.init_like(param_ptrs(bundle_.generator.parameters()));
    if (bundle_.discriminator) {
        dgrads_ = DiscriminatorGrads(*bundle_.discriminator);
        adam_d_.init_like(param_ptrs(bundle_.discriminator->parameters()));
    }
}

Trainer Trainer::resumed(const RunConfig& cfg) {
    Trainer t(cfg, true);
    const std::string path = state_path(cfg);
    Checkpoint ck =
        load_checkpoint(path, generator_spec_for(cfg), cfg.uses_discriminator());
    if (ck.bundle.meta.seed != cfg.seed)
        throw CheckpointError("checkpoint seed " +
                              std::to_string(ck.bundle.meta.seed) +
                              " differs from configured seed " +
                              std::to_string(cfg.seed));
    if (ck.bundle.meta.ablation != to_string(cfg.ablation))
        throw CheckpointError("checkpoint ablation '" + ck.bundle.meta.ablation +
                              "' differs from configured '" +
                              to_string(cfg.ablation) + "'");
    if (!ck.adam_g)
        throw CheckpointError(path + " lacks optimizer state; cannot resume");
    if (t.bundle_.discriminator && !ck.adam_d)
        throw CheckpointError(path +
                              " lacks discriminator optimizer state; cannot resume");
    t.bundle_ = std::move(ck.bundle);
    t.adam_g_ = std::move(*ck.adam_g);
    if (t.bundle_.discriminator) t.adam_d_ = std::move(*ck.adam_d);
    t.epoch_ = t.bundle_.meta.epoch;
    t.step_ = t.bundle_.meta.step;
    t.r_epoch1_sum_ = ck.extra.value("r_epoch1_sum", 0.0);
    t.r_epoch1_count_ = ck.extra.value("r_epoch1_count", std::int64_t{0});
    t.r_epoch1_mean_ = ck.extra.value("r_epoch1_mean", 0.0);
    t.diverge_count_ = ck.extra.value("diverge_count", 0);

    // Drop log lines past the checkpointed step so the continued log reads as
    // one uninterrupted run.
    const std::string log_path =
        (fs::path(cfg.output_dir) / "train_log.txt").string();
    std::ifstream in(log_path);
    if (in) {
        std::vector<std::string> kept;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') {
                kept.push_back(line);
                continue;
            }
            std::istringstream ls(line);
            std::int64_t s = 0;
            if ((ls >> s) && s <= t.step_) kept.push_back(line);
        }
        in.close();
        std::ofstream out(log_path, std::ios::trunc);
        for (const auto& l : kept) out << l << "\n";
    }
    return t;
}

TrainingSample Trainer::sample_for(std::size_t pos, std::int64_t epoch) {
    const ManifestEntry& e = manifest_.entries[train_entry_[pos]];
    if (!cfg_.cache_images)
        return make_training_sample(e, cfg_.seed, epoch, pos, cfg_.crop,
                                    cfg_.canonical_resize);
    auto it = cache_.find(pos);
    if (it == cache_.end()) {
        Image flash, ambient;
        try {
            flash = load_image(e.flash_path);
            ambient = load_image(e.ambient_path);
        } catch (const Error& err) {
            throw DataError("pair " + e.pair_id + ": " + err.what());
        }
        if (cfg_.canonical_resize) {
            flash = resize_canonical(flash);
            ambient = resize_canonical(ambient);
        }
        if (!flash.same_shape(ambient))
            throw DataError("pair " + e.pair_id + ": flash/ambient shape mismatch");
        it = cache_.emplace(pos, std::make_pair(std::move(flash), std::move(ambient)))
                 .first;
    }
    PairedAugmentation aug;
    try {
        aug = PairedAugmentation::draw(sample_seed(cfg_.seed, epoch, pos),
                                       it->second.first.height(),
                                       it->second.first.width(), cfg_.crop);
    } catch (const Error& err) {
        throw DataError("pair " + e.pair_id + ": " + err.what());
    }
    return assemble_sample(it->second.first, it->second.second, e.pair_id, aug);
}

LossBreakdown Trainer::train_step(const std::vector<TrainingSample>& batch) {
    if (batch.empty()) throw DataError("train_step on an empty batch");
    std::vector<Image> flashes, ambients;
    std::vector<AttentionMap> maps;
    for (const auto& s : batch) {
        flashes.push_back(s.flash_crop);
        ambients.push_back(s.ambient_crop);
        maps.push_back(s.attention);
    }
    const Tensor x = images_to_tensor(flashes);
    const Tensor y = images_to_tensor(ambients);

    GeneratorActs gacts;
    const Tensor yhat = bundle_.generator.forward(x, &gacts);

    const bool masked = cfg_.uses_mask();
    Tensor mask;
    Tensor y_obj = y, yhat_obj = yhat;
    if (masked) {
        mask = maps_to_tensor(maps);
        y_obj = apply_mask(y, mask);
        yhat_obj = apply_mask(yhat, mask);
    }

    LossBreakdown lb;
    lb.lambda = cfg_.effective_lambda();

    if (bundle_.discriminator) {
        DiscriminatorActs acts_real, acts_fake;
        const Tensor z_real = bundle_.discriminator->forward(y_obj, &acts_real);
        const Tensor z_fake = bundle_.discriminator->forward(yhat_obj, &acts_fake);
        Tensor g_real = Tensor::zeros_like(z_real);
        Tensor g_fake = Tensor::zeros_like(z_fake);
        lb.adversarial_d = discriminator_loss_grad(z_real, z_fake, g_real, g_fake);
        dgrads_.zero();
        bundle_.discriminator->backward(acts_real, g_real, &dgrads_, false);
        bundle_.discriminator->backward(acts_fake, g_fake, &dgrads_, false);
        adam_step(param_ptrs(bundle_.discriminator->parameters()), dgrads_.flat(),
                  adam_d_,
                  {cfg_.lr_discriminator, cfg_.adam_beta1, cfg_.adam_beta2, 1e-8});
    }

    Tensor grad_obj = Tensor::zeros_like(yhat_obj);
    lb.reconstruction = l1_mean_loss_grad(y_obj, yhat_obj, grad_obj);
    if (bundle_.discriminator && lb.lambda > 0.0) {
        // The generator update reads the just-updated discriminator.
        DiscriminatorActs acts_adv;
        const Tensor z_adv = bundle_.discriminator->forward(yhat_obj, &acts_adv);
        Tensor g_adv = Tensor::zeros_like(z_adv);
        lb.adversarial_g = generator_adversarial_loss_grad(z_adv, g_adv);
        const Tensor d_dx = bundle_.discriminator->backward(acts_adv, g_adv,
                                                            nullptr, true);
        axpy_inplace(grad_obj, lb.lambda, d_dx);
    }
    const Tensor grad_out = masked ? apply_mask(grad_obj, mask)
                                   : std::move(grad_obj);
    ggrads_.zero();
    bundle_.generator.backward(gacts, grad_out, ggrads_);
    adam_step(param_ptrs(bundle_.generator.parameters()), ggrads_.flat(), adam_g_,
              {cfg_.lr_generator, cfg_.adam_beta1, cfg_.adam_beta2, 1e-8});

    lb.total_g = total_generator_loss(lb.reconstruction, lb.adversarial_g,
                                      lb.lambda);
    if (!std::isfinite(lb.reconstruction) || !std::isfinite(lb.adversarial_d) ||
        !std::isfinite(lb.adversarial_g) || !std::isfinite(lb.total_g))
        throw NumericError("non-finite loss after step " +
                           std::to_string(step_ + 1) + " on pair(s) " +
                           batch_ids(batch));
    return lb;
}

LossBreakdown Trainer::measure(const std::vector<TrainingSample>& batch,
                               double lambda) const {
    if (batch.empty()) throw DataError("measure on an empty batch");
    std::vector<Image> flashes, ambients;
    std::vector<AttentionMap> maps;
    for (const auto& s : batch) {
        flashes.push_back(s.flash_crop);
        ambients.push_back(s.ambient_crop);
        maps.push_back(s.attention);
    }
    const Tensor x = images_to_tensor(flashes);
    const Tensor y = images_to_tensor(ambients);
    const Tensor yhat = bundle_.generator.forward(x, nullptr);
    Tensor y_obj = y, yhat_obj = yhat;
    if (cfg_.uses_mask()) {
        const Tensor mask = maps_to_tensor(maps);
        y_obj = apply_mask(y, mask);
        yhat_obj = apply_mask(yhat, mask);
    }
    LossBreakdown lb;
    lb.lambda = lambda;
    Tensor scratch = Tensor::zeros_like(yhat_obj);
    lb.reconstruction = l1_mean_loss_grad(y_obj, yhat_obj, scratch);
    if (bundle_.discriminator) {
        const Tensor z_real = bundle_.discriminator->forward(y_obj, nullptr);
        const Tensor z_fake = bundle_.discriminator->forward(yhat_obj, nullptr);
        Tensor gr = Tensor::zeros_like(z_real), gf = Tensor::zeros_like(z_fake);
        lb.adversarial_d = discriminator_loss_grad(z_real, z_fake, gr, gf);
        lb.adversarial_g = generator_adversarial_loss_grad(z_fake, gf);
    }
    lb.total_g = total_generator_loss(lb.reconstruction, lb.adversarial_g, lambda);
    return lb;
}

void Trainer::guard(const LossBreakdown& lb, const std::string& ids) {
    if (r_epoch1_mean_ <= 0.0) return; // first epoch still accumulating
    if (lb.reconstruction > 10.0 * r_epoch1_mean_) {
        if (++diverge_count_ >= 100)
            throw NumericError(
                "training diverged: reconstruction loss " +
                std::to_string(lb.reconstruction) + " exceeded 10x the "
                "first-epoch mean (" + std::to_string(r_epoch1_mean_) +
                ") for 100 consecutive steps, last batch " + ids);
    } else {
        diverge_count_ = 0;
    }
}

TrainResult Trainer::run() {
    if (manifest_.entries.empty())
        throw DataError("cannot run training without a loaded manifest");
    if (train_entry_.empty()) throw DataError("train split is empty");
    fs::create_directories(cfg_.output_dir);
    const std::string log_path =
        (fs::path(cfg_.output_dir) / "train_log.txt").string();
    std::ofstream log;
    if (step_ == 0) {
        log.open(log_path, std::ios::trunc);
        log << "# step epoch R A_d A_g L wall_ms\n";
    } else {
        log.open(log_path, std::ios::app);
    }
    if (!log) throw DataError("cannot open " + log_path);

    TrainResult res;
    res.log_path = log_path;
    res.state_path = state_path(cfg_);
    res.model_path = (fs::path(cfg_.output_dir) / "model_final.nta").string();

    bool capped = false;
    for (std::int64_t ep = epoch_ + 1; ep <= cfg_.epochs && !capped; ++ep) {
        const auto order = epoch_permutation(train_entry_.size(), cfg_.seed, ep);
        const std::int64_t steps_before = step_;
        for (std::size_t b = 0; b < order.size() && !capped;
             b += static_cast<std::size_t>(cfg_.batch_size)) {
            if (cfg_.max_steps > 0 && step_ >= cfg_.max_steps) {
                capped = true;
                break;
            }
            std::vector<TrainingSample> batch;
            const std::size_t end =
                std::min(order.size(), b + static_cast<std::size_t>(cfg_.batch_size));
            for (std::size_t k = b; k < end; ++k) {
                try {
                    batch.push_back(sample_for(order[k], ep));
                } catch (const DataError& e) {
                    std::clog << "warning: skipping training sample: " << e.what()
                              << "\n";
                }
            }
            if (batch.empty()) continue;
            const auto t0 = std::chrono::steady_clock::now();
            const LossBreakdown lb = train_step(batch);
            const double wall_ms =
                std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
            ++step_;
            if (ep == 1) {
                r_epoch1_sum_ += lb.reconstruction;
                ++r_epoch1_count_;
            }
            guard(lb, batch_ids(batch));
            char line[256];
            std::snprintf(line, sizeof line, "%lld %lld %.17g %.17g %.17g %.17g %.3f\n",
                          static_cast<long long>(step_), static_cast<long long>(ep),
                          lb.reconstruction, lb.adversarial_d, lb.adversarial_g,
                          lb.total_g, wall_ms);
            log << line;
            log.flush();
            res.history.push_back({step_, ep, lb, wall_ms});
        }
        if (!capped) {
            // Skipping the odd bad sample is routine; an epoch where every
            // sample was skipped means this config cannot train on this data.
            if (step_ == steps_before)
                throw AugmentationError(
                    "epoch " + std::to_string(ep) +
                    " produced no usable training samples; every pair was "
                    "skipped (see warnings)");
            epoch_ = ep;
            if (ep == 1 && r_epoch1_count_ > 0)
                r_epoch1_mean_ = r_epoch1_sum_ / static_cast<double>(r_epoch1_count_);
            if (ep % cfg_.checkpoint_every == 0 || ep == cfg_.epochs) save_state();
        }
    }
    if (cfg_.epochs == 0) save_state();

    bundle_.meta.epoch = epoch_;
    bundle_.meta.step = step_;
    save_checkpoint(res.model_path, bundle_);
    res.steps_run = step_;
    return res;
}

void Trainer::save_state() const {
    auto& self = const_cast<Trainer&>(*this);
    self.bundle_.meta.epoch = epoch_;
    self.bundle_.meta.step = step_;
    nlohmann::json extra = {{"r_epoch1_sum", r_epoch1_sum_},
                            {"r_epoch1_count", r_epoch1_count_},
                            {"r_epoch1_mean", r_epoch1_mean_},
                            {"diverge_count", diverge_count_}};
    const std::string path = state_path(cfg_);
    const std::string tmp = path + ".tmp";
    save_checkpoint(tmp, bundle_, &adam_g_,
                    bundle_.discriminator ? &adam_d_ : nullptr, extra);
    fs::rename(tmp, path);
}

namespace {

std::string condition_label(Ablation a) {
    switch (a) {
        case Ablation::DEFAULT: return "masked R + masked A";
        case Ablation::R_PLUS_A: return "R + A";
        case Ablation::R_ONLY: return "R";
        case Ablation::UNET_SCRATCH: return "U-Net";
    }
    return "?";
}

} // namespace

AblationResult run_ablation_matrix(const RunConfig& base,
                                   const std::vector<Ablation>& conditions) {
    AblationResult res;
    for (Ablation cond : conditions) {
        AblationOutcome row;
        row.condition = cond;
        RunConfig cfg = base;
        cfg.ablation = cond;
        cfg.output_dir =
            (fs::path(base.output_dir) / to_string(cond)).string();
        try {
            Trainer trainer(cfg);
            if (cond == Ablation::R_ONLY && trainer.bundle().discriminator)
                throw NumericError("R_ONLY unexpectedly allocated a discriminator");
            trainer.run();
            row.report = evaluate(trainer.manifest(), trainer.bundle(),
                                  EvalOptions{cfg.canonical_resize});
            row.report.write(
                (fs::path(cfg.output_dir) / "eval_report.txt").string());
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        res.rows.push_back(std::move(row));
    }

    std::ostringstream os;
    os << "Condition                  PSNR (dB)    SSIM\n";
    os << "-----------------------------------------------\n";
    for (const auto& row : res.rows) {
        char buf[160];
        if (row.ok) {
            std::snprintf(buf, sizeof buf, "%-25s %9.2f  %6.3f\n",
                          condition_label(row.condition).c_str(),
                          row.report.mean_psnr, row.report.mean_ssim);
        } else {
            std::snprintf(buf, sizeof buf, "%-25s FAILED: %s\n",
                          condition_label(row.condition).c_str(),
                          row.error.c_str());
        }
        os << buf;
    }
    os << "-----------------------------------------------\n";
    os << "Full-scale reference (curated 969/116 split, 1000 epochs; context\n"
          "only, not asserted at this scale): masked R + masked A 15.67/0.684,\n"
          "R + A 15.55/0.676, R 15.64/0.681, U-Net 14.81/0.643\n";
    res.table = os.str();
    return res;
}

} // namespace f2a
