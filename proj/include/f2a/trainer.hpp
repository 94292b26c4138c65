#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "f2a/config.hpp"
#include "f2a/data.hpp"
#include "f2a/losses.hpp"
#include "f2a/metrics.hpp"
#include "f2a/networks.hpp"
#include "f2a/optim.hpp"

namespace f2a {

struct StepRecord {
    std::int64_t step = 0;
    std::int64_t epoch = 0;
    LossBreakdown losses;
    double wall_ms = 0.0;
};

struct TrainResult {
    std::vector<StepRecord> history;
    std::string log_path;
    std::string state_path; // resumable checkpoint (epoch-boundary)
    std::string model_path; // final parameters
    std::int64_t steps_run = 0;
};

// Alternating-update loop: per batch, the discriminator is updated on masked
// real/fake pairs first, then the generator update reads the refreshed
// discriminator. R_ONLY and (by default) UNET_SCRATCH never construct a
// discriminator.
class Trainer {
public:
    explicit Trainer(const RunConfig& cfg);

    // Probe constructor for tests: adopts an existing bundle, skips manifest
    // loading. run() is unavailable without a manifest.
    Trainer(const RunConfig& cfg, ModelBundle bundle);

    // Resumes from <output_dir>/state_latest.nta. Architecture, ablation, and
    // seed must match the config; the training log is truncated back to the
    // checkpointed step so the continued log stays consistent.
    static Trainer resumed(const RunConfig& cfg);

    // One optimization step. Throws NumericError on non-finite losses.
    LossBreakdown train_step(const std::vector<TrainingSample>& batch);

    // Loss measurement at a given lambda with no parameter updates.
    LossBreakdown measure(const std::vector<TrainingSample>& batch,
                          double lambda) const;

    // The configured loop: shuffled epochs, append-only logging, checkpoints
    // every checkpoint_every epochs and at the end.
    TrainResult run();

    ModelBundle& bundle() { return bundle_; }
    const ModelBundle& bundle() const { return bundle_; }
    const RunConfig& config() const { return cfg_; }
    const DatasetManifest& manifest() const { return manifest_; }
    AdamState& adam_generator() { return adam_g_; }
    AdamState& adam_discriminator() { return adam_d_; }
    std::int64_t completed_epochs() const { return epoch_; }
    std::int64_t steps() const { return step_; }

    static std::string state_path(const RunConfig& cfg);

private:
    Trainer(const RunConfig& cfg, bool load_data);

    TrainingSample sample_for(std::size_t train_pos, std::int64_t epoch);
    void save_state() const;
    void guard(const LossBreakdown& lb, const std::string& batch_ids);

    RunConfig cfg_;
    DatasetManifest manifest_;
    std::vector<std::size_t> train_entry_; // manifest indices of the train split
    ModelBundle bundle_;
    AdamState adam_g_, adam_d_;
    GeneratorGrads ggrads_;
    DiscriminatorGrads dgrads_;
    std::int64_t epoch_ = 0; // completed epochs
    std::int64_t step_ = 0;  // completed steps
    // Divergence guard: reconstruction loss compared against 10x its
    // first-epoch mean; 100 consecutive violations abort the run.
    double r_epoch1_sum_ = 0.0;
    std::int64_t r_epoch1_count_ = 0;
    double r_epoch1_mean_ = 0.0;
    int diverge_count_ = 0;
    std::unordered_map<std::size_t, std::pair<Image, Image>> cache_;
};

struct AblationOutcome {
    Ablation condition = Ablation::DEFAULT;
    bool ok = false;
    std::string error;
    EvalReport report;
};

struct AblationResult {
    std::vector<AblationOutcome> rows;
    std::string table; // rendered comparison, one row per condition
};

// Trains every condition off the same manifest and seed, evaluates each on
// the test split, and renders the comparison table. A failing condition is
// recorded and the rest continue.
AblationResult run_ablation_matrix(const RunConfig& base,
                                   const std::vector<Ablation>& conditions);

} // namespace f2a
