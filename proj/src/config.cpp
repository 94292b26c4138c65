#include "f2a/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "f2a/errors.hpp"

namespace f2a {

std::string to_string(Ablation a) {
    switch (a) {
        case Ablation::DEFAULT: return "DEFAULT";
        case Ablation::R_PLUS_A: return "R_PLUS_A";
        case Ablation::R_ONLY: return "R_ONLY";
        case Ablation::UNET_SCRATCH: return "UNET_SCRATCH";
    }
    return "DEFAULT";
}

Ablation ablation_from_string(const std::string& s) {
    if (s == "DEFAULT") return Ablation::DEFAULT;
    if (s == "R_PLUS_A") return Ablation::R_PLUS_A;
    if (s == "R_ONLY") return Ablation::R_ONLY;
    if (s == "UNET_SCRATCH") return Ablation::UNET_SCRATCH;
    throw DataError("unknown ablation '" + s +
                    "' (expected DEFAULT, R_PLUS_A, R_ONLY, or UNET_SCRATCH)");
}

std::vector<std::string> RunConfig::validate() const {
    if (lambda < 0.0) throw DataError("lambda must be >= 0");
    if (lr_generator <= 0.0 || lr_discriminator <= 0.0)
        throw DataError("learning rates must be positive");
    if (adam_beta1 < 0.0 || adam_beta1 >= 1.0 || adam_beta2 < 0.0 ||
        adam_beta2 >= 1.0)
        throw DataError("Adam betas must lie in [0, 1)");
    if (epochs < 0) throw DataError("epochs must be >= 0");
    if (batch_size < 1) throw DataError("batch_size must be >= 1");
    if (crop < 1) throw DataError("crop must be >= 1");
    if (checkpoint_every < 1) throw DataError("checkpoint_every must be >= 1");
    if (max_steps < 0) throw DataError("max_steps must be >= 0");
    std::vector<std::string> warnings;
    if (uses_discriminator() && lr_discriminator >= lr_generator) {
        std::ostringstream os;
        os << "discriminator learning rate (" << lr_discriminator
           << ") is not below the generator learning rate (" << lr_generator
           << "); an equal or faster discriminator tends to diverge";
        warnings.push_back(os.str());
    }
    return warnings;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_bool(const std::string& v, bool& out) {
    if (v == "true" || v == "1") { out = true; return true; }
    if (v == "false" || v == "0") { out = false; return true; }
    return false;
}

} // namespace

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw DataError("config line " + std::to_string(lineno) +
                            ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string val = trim(stripped.substr(eq + 1));
        if (key.empty() || val.empty())
            throw DataError("config line " + std::to_string(lineno) +
                            ": empty key or value");
        auto bad_value = [&]() {
            return DataError("config line " + std::to_string(lineno) +
                             ": cannot parse value '" + val + "' for key '" +
                             key + "'");
        };
        auto as_double = [&](double& out) {
            std::size_t used = 0;
            try { out = std::stod(val, &used); } catch (...) { throw bad_value(); }
            if (used != val.size()) throw bad_value();
        };
        auto as_i64 = [&](std::int64_t& out) {
            std::size_t used = 0;
            try { out = std::stoll(val, &used); } catch (...) { throw bad_value(); }
            if (used != val.size()) throw bad_value();
        };
        auto as_bool = [&](bool& out) {
            if (!parse_bool(val, out)) throw bad_value();
        };
        if (key == "lambda") as_double(cfg.lambda);
        else if (key == "lr_generator") as_double(cfg.lr_generator);
        else if (key == "lr_discriminator") as_double(cfg.lr_discriminator);
        else if (key == "adam_beta1") as_double(cfg.adam_beta1);
        else if (key == "adam_beta2") as_double(cfg.adam_beta2);
        else if (key == "epochs") as_i64(cfg.epochs);
        else if (key == "batch_size") {
            std::int64_t v = 0; as_i64(v); cfg.batch_size = static_cast<int>(v);
        } else if (key == "crop") {
            std::int64_t v = 0; as_i64(v); cfg.crop = static_cast<int>(v);
        } else if (key == "seed") {
            try { cfg.seed = std::stoull(val); } catch (...) { throw bad_value(); }
        } else if (key == "ablation") {
            cfg.ablation = ablation_from_string(val);
        } else if (key == "manifest") cfg.manifest = val;
        else if (key == "weights_archive") cfg.weights_archive = val;
        else if (key == "output_dir") cfg.output_dir = val;
        else if (key == "checkpoint_every") as_i64(cfg.checkpoint_every);
        else if (key == "max_steps") as_i64(cfg.max_steps);
        else if (key == "canonical_resize") as_bool(cfg.canonical_resize);
        else if (key == "cache_images") as_bool(cfg.cache_images);
        else if (key == "unet_adversarial") as_bool(cfg.unet_adversarial);
        else
            throw DataError("config line " + std::to_string(lineno) +
                            ": unknown key '" + key + "'");
    }
}

} // namespace f2a
