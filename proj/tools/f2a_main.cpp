#include <algorithm>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "f2a/checkpoint.hpp"
#include "f2a/config.hpp"
#include "f2a/data.hpp"
#include "f2a/errors.hpp"
#include "f2a/image_io.hpp"
#include "f2a/metrics.hpp"
#include "f2a/trainer.hpp"

namespace {

// 0 success, 1 usage, 2 data problems, 3 runtime/numeric failures.
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

int classify(const std::exception& e) {
    if (dynamic_cast<const f2a::DataError*>(&e) != nullptr ||
        dynamic_cast<const f2a::InvalidPairError*>(&e) != nullptr ||
        dynamic_cast<const f2a::RangeError*>(&e) != nullptr ||
        dynamic_cast<const f2a::AugmentationError*>(&e) != nullptr)
        return kExitData;
    return kExitRuntime;
}

void add_run_config_flags(CLI::App* cmd, f2a::RunConfig& cfg,
                          std::string& ablation, std::string& config_path) {
    cmd->add_option("--config", config_path,
                    "key = value config file applied before CLI flags");
    cmd->add_option("--lambda", cfg.lambda, "adversarial weight");
    cmd->add_option("--lr_generator", cfg.lr_generator, "generator Adam rate");
    cmd->add_option("--lr_discriminator", cfg.lr_discriminator,
                    "discriminator Adam rate");
    cmd->add_option("--adam_beta1", cfg.adam_beta1, "Adam beta1");
    cmd->add_option("--adam_beta2", cfg.adam_beta2, "Adam beta2");
    cmd->add_option("--epochs", cfg.epochs, "training epochs");
    cmd->add_option("--batch_size", cfg.batch_size, "samples per step");
    cmd->add_option("--crop", cfg.crop, "square crop size");
    cmd->add_option("--seed", cfg.seed, "run seed");
    cmd->add_option("--ablation", ablation, "DEFAULT, R_PLUS_A, R_ONLY, UNET_SCRATCH")
        ->check(CLI::IsMember({"DEFAULT", "R_PLUS_A", "R_ONLY", "UNET_SCRATCH"}));
    cmd->add_option("--manifest", cfg.manifest, "dataset manifest path");
    cmd->add_option("--weights_archive", cfg.weights_archive,
                    "pretrained encoder archive (empty = random init)");
    cmd->add_option("--output_dir", cfg.output_dir, "run output directory");
    cmd->add_option("--checkpoint_every", cfg.checkpoint_every,
                    "checkpoint cadence in epochs");
    cmd->add_option("--max_steps", cfg.max_steps, "stop after N steps (0 = off)");
    cmd->add_option("--canonical_resize", cfg.canonical_resize,
                    "resize pairs to the canonical resolution (true/false)");
    cmd->add_option("--cache_images", cfg.cache_images,
                    "cache decoded images in memory (true/false)");
    cmd->add_option("--unet_adversarial", cfg.unet_adversarial,
                    "give the UNET_SCRATCH condition an adversarial term");
}

// The config file must not clobber explicit CLI flags, so it is applied to
// the defaults before CLI11 parses.
std::string prescan_config(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") return argv[i + 1];
    return {};
}

f2a::ModelBundle load_bundle(const std::string& path) {
    return f2a::load_checkpoint(path).bundle;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"flash-to-ambient translation: attention-guided adversarial "
                 "training, inference, and evaluation"};
    app.require_subcommand(1);

    f2a::RunConfig cfg;
    std::string ablation = "DEFAULT";
    std::string config_path;
    const std::string pre_config = prescan_config(argc, argv);
    if (!pre_config.empty()) {
        try {
            f2a::apply_config_file(cfg, pre_config);
            ablation = f2a::to_string(cfg.ablation);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitData;
        }
    }

    auto* train = app.add_subcommand("train", "run the training loop");
    bool resume = false;
    add_run_config_flags(train, cfg, ablation, config_path);
    train->add_flag("--resume", resume,
                    "continue from <output_dir>/state_latest.nta");

    auto* infer = app.add_subcommand("infer", "translate flash images");
    std::string ckpt_path, input_path, output_path;
    infer->add_option("--checkpoint", ckpt_path, "model checkpoint")->required();
    infer->add_option("--input", input_path, "flash image, or a directory of them")
        ->required();
    infer->add_option("--output", output_path,
                      "output image path (directory input: output directory)")
        ->required();

    auto* eval = app.add_subcommand("eval", "evaluate on the manifest test split");
    std::string eval_manifest, report_path = "eval_report.txt", method = "ours";
    bool identity = false, native_size = false;
    eval->add_option("--checkpoint", ckpt_path, "model checkpoint");
    eval->add_option("--manifest", eval_manifest, "dataset manifest")->required();
    eval->add_option("--report", report_path, "report file path");
    eval->add_option("--method", method, "row label for the summary table");
    eval->add_flag("--identity", identity,
                   "evaluate the identity mapping instead of a checkpoint "
                   "(pipeline debugging)");
    eval->add_flag("--native-size", native_size,
                   "evaluate at native image size instead of canonical");

    auto* attn = app.add_subcommand("attn", "write the attention map of a pair");
    std::string flash_path, ambient_path;
    attn->add_option("--flash", flash_path, "flash image")->required();
    attn->add_option("--ambient", ambient_path, "ambient image")->required();
    attn->add_option("--output", output_path, "attention PNG path")->required();

    auto* synth = app.add_subcommand("synth", "generate a synthetic paired dataset");
    f2a::SynthSceneSpec sspec;
    std::string synth_dir;
    int n_train = 4, n_test = 0;
    bool no_falloff = false;
    synth->add_option("--output_dir", synth_dir, "dataset directory")->required();
    synth->add_option("--count", n_train, "training pairs");
    synth->add_option("--test", n_test, "test pairs");
    synth->add_option("--height", sspec.height, "image height");
    synth->add_option("--width", sspec.width, "image width");
    synth->add_option("--shadows", sspec.shadow_polygons, "shadow polygons per scene");
    synth->add_option("--noise", sspec.noise_level, "flash noise amplitude");
    synth->add_option("--seed", sspec.seed, "dataset seed");
    synth->add_flag("--no-falloff", no_falloff, "disable the radial flash gain");

    auto* ablate = app.add_subcommand(
        "ablate", "train & evaluate the four loss-configuration conditions");
    add_run_config_flags(ablate, cfg, ablation, config_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        cfg.ablation = f2a::ablation_from_string(ablation);
        if (train->parsed()) {
            f2a::Trainer trainer =
                resume ? f2a::Trainer::resumed(cfg) : f2a::Trainer(cfg);
            const f2a::TrainResult res = trainer.run();
            std::cout << "trained " << res.steps_run << " step(s); state: "
                      << res.state_path << "; model: " << res.model_path
                      << "; log: " << res.log_path << "\n";
            if (!res.history.empty()) {
                const auto& last = res.history.back().losses;
                std::cout << "final losses: R=" << last.reconstruction
                          << " A_d=" << last.adversarial_d
                          << " A_g=" << last.adversarial_g
                          << " L=" << last.total_g << "\n";
            }
        } else if (infer->parsed()) {
            namespace fs = std::filesystem;
            const f2a::ModelBundle bundle = load_bundle(ckpt_path);
            std::vector<std::pair<std::string, std::string>> jobs; // input, output
            if (fs::is_directory(input_path)) {
                fs::create_directories(output_path);
                for (const auto& entry : fs::directory_iterator(input_path)) {
                    const std::string ext = entry.path().extension().string();
                    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg")
                        jobs.emplace_back(
                            entry.path().string(),
                            (fs::path(output_path) / entry.path().filename())
                                .string());
                }
                std::sort(jobs.begin(), jobs.end());
            } else {
                jobs.emplace_back(input_path, output_path);
            }
            int failures = 0;
            for (const auto& [in, out] : jobs) {
                try {
                    const f2a::Image flash = f2a::load_image(in);
                    f2a::save_image(out, f2a::generator_infer(bundle.generator, flash));
                    std::cout << "wrote " << out << "\n";
                } catch (const std::exception& e) {
                    std::cerr << "error: " << in << ": " << e.what() << "\n";
                    ++failures;
                }
            }
            if (failures > 0) return kExitData;
        } else if (eval->parsed()) {
            const f2a::DatasetManifest manifest = f2a::load_manifest(eval_manifest);
            const f2a::EvalOptions opts{!native_size};
            f2a::EvalReport report;
            if (identity) {
                report = f2a::evaluate(
                    manifest, [](const f2a::Image& img) { return img; }, opts);
            } else {
                if (ckpt_path.empty())
                    throw f2a::DataError("eval needs --checkpoint or --identity");
                const f2a::ModelBundle bundle = load_bundle(ckpt_path);
                report = f2a::evaluate(manifest, bundle, opts);
            }
            report.write(report_path);
            std::cout << report.render_table(identity ? "identity" : method);
            std::cout << "report: " << report_path << "\n";
        } else if (attn->parsed()) {
            const f2a::Image flash = f2a::load_image(flash_path);
            const f2a::Image ambient = f2a::load_image(ambient_path);
            f2a::save_attention_png(output_path, f2a::attention_map(ambient, flash));
            std::cout << "wrote " << output_path << "\n";
        } else if (synth->parsed()) {
            sspec.flash_falloff = !no_falloff;
            const std::string manifest_path =
                f2a::write_synth_dataset(synth_dir, n_train, n_test, sspec);
            std::cout << "wrote " << manifest_path << "\n";
        } else if (ablate->parsed()) {
            const std::vector<f2a::Ablation> conditions = {
                f2a::Ablation::DEFAULT, f2a::Ablation::R_PLUS_A,
                f2a::Ablation::R_ONLY, f2a::Ablation::UNET_SCRATCH};
            const f2a::AblationResult res = f2a::run_ablation_matrix(cfg, conditions);
            std::cout << res.table;
            for (const auto& row : res.rows)
                if (!row.ok) return kExitRuntime;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify(e);
    }
    return 0;
}
