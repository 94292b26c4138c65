#include "f2a/checkpoint.hpp"

#include "f2a/archive.hpp"
#include "f2a/errors.hpp"

namespace f2a {

namespace {

nlohmann::json gen_spec_json(const GeneratorSpec& s) {
    return {{"arch", s.arch == GenArch::VGG_UNET ? "vgg_unet" : "unet_scratch"},
            {"widths", s.encoder_widths},
            {"convs", s.convs_per_stage},
            {"slope", s.leaky_slope},
            {"pretrained", s.pretrained}};
}

GeneratorSpec gen_spec_from_json(const nlohmann::json& j) {
    GeneratorSpec s;
    const std::string arch = j.at("arch").get<std::string>();
    if (arch == "vgg_unet")
        s.arch = GenArch::VGG_UNET;
    else if (arch == "unet_scratch")
        s.arch = GenArch::UNET_SCRATCH;
    else
        throw CheckpointError("unknown generator architecture '" + arch + "'");
    s.encoder_widths = j.at("widths").get<std::vector<int>>();
    s.convs_per_stage = j.at("convs").get<std::vector<int>>();
    s.leaky_slope = j.at("slope").get<float>();
    s.pretrained = j.at("pretrained").get<bool>();
    return s;
}

nlohmann::json disc_spec_json(const DiscriminatorSpec& s) {
    return {{"in_channels", s.in_channels},
            {"widths", s.widths},
            {"slope", s.leaky_slope}};
}

DiscriminatorSpec disc_spec_from_json(const nlohmann::json& j) {
    DiscriminatorSpec s;
    s.in_channels = j.at("in_channels").get<int>();
    s.widths = j.at("widths").get<std::vector<int>>();
    s.leaky_slope = j.at("slope").get<float>();
    return s;
}

void store_params(NamedTensors& out, const std::string& prefix,
                  std::vector<ParamRef> params) {
    for (auto& p : params) out.emplace(prefix + p.name, *p.value);
}

void restore_params(const NamedTensors& in, const std::string& prefix,
                    std::vector<ParamRef> params) {
    for (auto& p : params) {
        auto it = in.find(prefix + p.name);
        if (it == in.end())
            throw CheckpointError("checkpoint missing tensor " + prefix + p.name);
        if (!it->second.same_shape(*p.value))
            throw CheckpointError("checkpoint tensor " + prefix + p.name +
                                  " has unexpected shape");
        *p.value = it->second;
    }
}

void store_adam(NamedTensors& out, const std::string& prefix,
                const std::vector<ParamRef>& params, const AdamState& st) {
    if (st.m.size() != params.size())
        throw CheckpointError("optimizer state does not match parameter list");
    for (std::size_t i = 0; i < params.size(); ++i) {
        out.emplace(prefix + ".m." + params[i].name, st.m[i]);
        out.emplace(prefix + ".v." + params[i].name, st.v[i]);
    }
}

AdamState restore_adam(const NamedTensors& in, const std::string& prefix,
                       const std::vector<ParamRef>& params, std::int64_t t) {
    AdamState st;
    st.t = t;
    for (const auto& p : params) {
        auto mi = in.find(prefix + ".m." + p.name);
        auto vi = in.find(prefix + ".v." + p.name);
        if (mi == in.end() || vi == in.end())
            throw CheckpointError("checkpoint missing optimizer tensors for " +
                                  p.name);
        st.m.push_back(mi->second);
        st.v.push_back(vi->second);
    }
    return st;
}

} // namespace

void save_checkpoint(const std::string& path, const ModelBundle& bundle,
                     const AdamState* adam_g, const AdamState* adam_d,
                     const nlohmann::json& extra) {
    nlohmann::json meta;
    meta["format_version"] = 1;
    meta["extra"] = extra;
    meta["config_hash"] = bundle.config_hash();
    meta["generator"] = gen_spec_json(bundle.generator.spec);
    meta["discriminator"] = bundle.discriminator
                                ? disc_spec_json(bundle.discriminator->spec)
                                : nlohmann::json(nullptr);
    meta["epoch"] = bundle.meta.epoch;
    meta["step"] = bundle.meta.step;
    meta["seed"] = bundle.meta.seed;
    meta["ablation"] = bundle.meta.ablation;
    meta["adam_g_t"] = adam_g != nullptr ? adam_g->t : -1;
    meta["adam_d_t"] = adam_d != nullptr ? adam_d->t : -1;

    NamedTensors tensors;
    // parameters() needs mutable access; checkpointing never writes through it
    auto& gen = const_cast<Generator&>(bundle.generator);
    store_params(tensors, "g.", gen.parameters());
    if (bundle.discriminator) {
        auto& disc = const_cast<Discriminator&>(*bundle.discriminator);
        store_params(tensors, "d.", disc.parameters());
        if (adam_d != nullptr) store_adam(tensors, "opt.d", disc.parameters(), *adam_d);
    } else if (adam_d != nullptr) {
        throw CheckpointError("optimizer state given for an absent discriminator");
    }
    if (adam_g != nullptr) store_adam(tensors, "opt.g", gen.parameters(), *adam_g);
    write_archive(path, meta, tensors);
}

Checkpoint load_checkpoint(const std::string& path) {
    nlohmann::json meta;
    NamedTensors tensors = read_archive(path, &meta);
    Checkpoint ck;
    try {
        ck.bundle.generator = Generator(gen_spec_from_json(meta.at("generator")), 0);
        if (!meta.at("discriminator").is_null())
            ck.bundle.discriminator =
                Discriminator(disc_spec_from_json(meta.at("discriminator")), 0);
        ck.bundle.meta.epoch = meta.at("epoch").get<std::int64_t>();
        ck.bundle.meta.step = meta.at("step").get<std::int64_t>();
        ck.bundle.meta.seed = meta.at("seed").get<std::uint64_t>();
        ck.bundle.meta.ablation = meta.at("ablation").get<std::string>();
        ck.extra = meta.value("extra", nlohmann::json::object());
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError(std::string("checkpoint metadata malformed: ") +
                              e.what());
    }
    const auto stored_hash = meta.at("config_hash").get<std::uint64_t>();
    if (stored_hash != ck.bundle.config_hash())
        throw CheckpointError(
            "checkpoint config hash does not match its own architecture block");
    restore_params(tensors, "g.", ck.bundle.generator.parameters());
    if (ck.bundle.discriminator)
        restore_params(tensors, "d.", ck.bundle.discriminator->parameters());
    const auto gt = meta.at("adam_g_t").get<std::int64_t>();
    if (gt >= 0)
        ck.adam_g = restore_adam(tensors, "opt.g",
                                 ck.bundle.generator.parameters(), gt);
    const auto dt = meta.at("adam_d_t").get<std::int64_t>();
    if (dt >= 0) {
        if (!ck.bundle.discriminator)
            throw CheckpointError(
                "checkpoint has discriminator optimizer state but no discriminator");
        ck.adam_d = restore_adam(tensors, "opt.d",
                                 ck.bundle.discriminator->parameters(), dt);
    }
    return ck;
}

Checkpoint load_checkpoint(const std::string& path,
                           const GeneratorSpec& expected_gen,
                           bool expect_discriminator) {
    nlohmann::json meta;
    read_archive(path, &meta);
    GeneratorSpec stored;
    try {
        stored = gen_spec_from_json(meta.at("generator"));
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError(std::string("checkpoint metadata malformed: ") +
                              e.what());
    }
    if (stored.arch_string() != expected_gen.arch_string())
        throw CheckpointError("architecture mismatch: checkpoint holds '" +
                              stored.arch_string() + "', expected '" +
                              expected_gen.arch_string() + "'");
    const bool has_disc = !meta.at("discriminator").is_null();
    if (has_disc != expect_discriminator)
        throw CheckpointError(has_disc
                                  ? "checkpoint has a discriminator but none was expected"
                                  : "checkpoint lacks the expected discriminator");
    return load_checkpoint(path);
}

} // namespace f2a
