#include "f2a/networks.hpp"

#include <sstream>

#include "f2a/archive.hpp"
#include "f2a/errors.hpp"

namespace f2a {

namespace {

std::string join_ints(const std::vector<int>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) os << ',';
        os << v[i];
    }
    return os.str();
}

} // namespace

GeneratorSpec GeneratorSpec::vgg_unet(bool pretrained) {
    GeneratorSpec s;
    s.arch = GenArch::VGG_UNET;
    s.encoder_widths = {64, 128, 256, 512, 512};
    s.convs_per_stage = {2, 2, 3, 3, 3};
    s.leaky_slope = 0.0f;
    s.pretrained = pretrained;
    return s;
}

GeneratorSpec GeneratorSpec::unet_scratch() {
    GeneratorSpec s;
    s.arch = GenArch::UNET_SCRATCH;
    s.encoder_widths = {64, 128, 256, 512, 1024};
    s.convs_per_stage = {2, 2, 2, 2, 2};
    s.leaky_slope = 0.2f;
    s.pretrained = false;
    return s;
}

std::vector<std::pair<int, int>> GeneratorSpec::skip_connections() const {
    std::vector<std::pair<int, int>> out;
    for (int s = 1; s <= stages(); ++s) out.emplace_back(s, s);
    return out;
}

std::string GeneratorSpec::arch_string() const {
    std::ostringstream os;
    os << (arch == GenArch::VGG_UNET ? "vgg_unet" : "unet_scratch")
       << "|widths=" << join_ints(encoder_widths)
       << "|convs=" << join_ints(convs_per_stage) << "|slope=" << leaky_slope
       << "|out=sigmoid";
    return os.str();
}

Generator::Generator(const GeneratorSpec& s, std::uint64_t seed) : spec(s) {
    const int S = spec.stages();
    if (S == 0 || spec.convs_per_stage.size() != spec.encoder_widths.size())
        throw ShapeError("generator spec has inconsistent stage lists");
    Rng rng(seed);
    enc.resize(S);
    for (int st = 0; st < S; ++st) {
        int in_ch = st == 0 ? 3 : spec.encoder_widths[st - 1];
        for (int i = 0; i < spec.convs_per_stage[st]; ++i) {
            enc[st].emplace_back(in_ch, spec.encoder_widths[st], 3, 1, 1);
            enc[st].back().init_gaussian(rng, 0.02f);
            in_ch = spec.encoder_widths[st];
        }
    }
    for (int d = 0; d < S; ++d) {
        const int width = spec.encoder_widths[S - 1 - d];
        const int in_ch = d == 0 ? spec.encoder_widths[S - 1]
                                 : spec.encoder_widths[S - d];
        dec_conv.emplace_back(in_ch, width, 3, 1, 1);
        dec_conv.back().init_gaussian(rng, 0.02f);
        dec_fuse.emplace_back(2 * width, width, 3, 1, 1);
        dec_fuse.back().init_gaussian(rng, 0.02f);
    }
    out_conv = Conv2d(spec.encoder_widths[0], 3, 3, 1, 1);
    out_conv.init_gaussian(rng, 0.02f);
}

Tensor Generator::forward(const Tensor& x, GeneratorActs* acts,
                          bool zero_skips) const {
    const int S = spec.stages();
    const int factor = 1 << S;
    if (x.h % factor != 0 || x.w % factor != 0)
        throw ShapeError("generator input " + std::to_string(x.h) + "x" +
                         std::to_string(x.w) + " not divisible by " +
                         std::to_string(factor));
    const bool lk = spec.leaky_slope > 0.0f;
    auto act = [&](const Tensor& t) {
        return lk ? leaky_relu(t, spec.leaky_slope) : relu(t);
    };

    GeneratorActs a;
    a.stage_in.resize(S);
    a.enc_act.resize(S);
    a.pool_idx.resize(S);
    a.pool_in.resize(S);
    Tensor cur = x;
    for (int st = 0; st < S; ++st) {
        a.stage_in[st] = std::move(cur);
        const int nconv = spec.convs_per_stage[st];
        for (int i = 0; i < nconv; ++i) {
            const Tensor& in = i == 0 ? a.stage_in[st] : a.enc_act[st][i - 1];
            a.enc_act[st].push_back(act(enc[st][i].forward(in)));
        }
        const Tensor& pre_pool = a.enc_act[st].back();
        a.pool_in[st] = {pre_pool.h, pre_pool.w};
        cur = maxpool2(pre_pool, a.pool_idx[st]);
    }
    a.bottleneck = cur;
    for (int d = 0; d < S; ++d) {
        const int st = S - 1 - d;
        a.up_out.push_back(upsample_nearest2(cur));
        a.up_act.push_back(act(dec_conv[d].forward(a.up_out.back())));
        const Tensor& skip = a.enc_act[st].back();
        a.cat.push_back(zero_skips
                            ? concat_channels(a.up_act.back(), Tensor::zeros_like(skip))
                            : concat_channels(a.up_act.back(), skip));
        a.fuse_act.push_back(act(dec_fuse[d].forward(a.cat.back())));
        cur = a.fuse_act.back();
    }
    a.out = sigmoid_fw(out_conv.forward(cur));
    Tensor out = a.out;
    if (acts != nullptr) *acts = std::move(a);
    return out;
}

void Generator::backward(const GeneratorActs& a, const Tensor& dy,
                         GeneratorGrads& g) const {
    const int S = spec.stages();
    const bool lk = spec.leaky_slope > 0.0f;
    auto act_bwd = [&](const Tensor& y, const Tensor& d) {
        return lk ? leaky_relu_backward(y, d, spec.leaky_slope)
                  : relu_backward(y, d);
    };

    Tensor dz = sigmoid_backward(a.out, dy);
    Tensor dcur = out_conv.backward(a.fuse_act[S - 1], dz, &g.out_w, &g.out_b, true);
    std::vector<Tensor> dskip(S);
    for (int d = S - 1; d >= 0; --d) {
        const int st = S - 1 - d;
        const int width = spec.encoder_widths[st];
        Tensor dfa = act_bwd(a.fuse_act[d], dcur);
        Tensor dcat = dec_fuse[d].backward(a.cat[d], dfa, &g.dec_fuse_w[d],
                                           &g.dec_fuse_b[d], true);
        Tensor dupact, dsk;
        split_channels(dcat, width, dupact, dsk);
        dskip[st] = std::move(dsk);
        Tensor dua = act_bwd(a.up_act[d], dupact);
        Tensor dup = dec_conv[d].backward(a.up_out[d], dua, &g.dec_conv_w[d],
                                          &g.dec_conv_b[d], true);
        dcur = upsample_nearest2_backward(dup);
    }
    for (int st = S - 1; st >= 0; --st) {
        Tensor dact = maxpool2_backward(dcur, a.pool_idx[st], a.pool_in[st].first,
                                        a.pool_in[st].second);
        add_inplace(dact, dskip[st]); // skip and pool both consume this activation
        const int nconv = spec.convs_per_stage[st];
        for (int i = nconv - 1; i >= 0; --i) {
            Tensor dpre = act_bwd(a.enc_act[st][i], dact);
            const Tensor& in = i == 0 ? a.stage_in[st] : a.enc_act[st][i - 1];
            const bool need_dx = !(st == 0 && i == 0);
            dact = enc[st][i].backward(in, dpre, &g.enc_w[st][i], &g.enc_b[st][i],
                                       need_dx);
        }
        dcur = std::move(dact);
    }
}

std::vector<ParamRef> Generator::parameters() {
    std::vector<ParamRef> out;
    const int S = spec.stages();
    for (int st = 0; st < S; ++st) {
        for (std::size_t i = 0; i < enc[st].size(); ++i) {
            const std::string base = "enc.conv" + std::to_string(st + 1) + "_" +
                                     std::to_string(i + 1);
            out.push_back({base + ".weight", &enc[st][i].w});
            out.push_back({base + ".bias", &enc[st][i].b});
        }
    }
    for (int d = 0; d < S; ++d) {
        const std::string n = std::to_string(S - d);
        out.push_back({"dec.conv" + n + ".weight", &dec_conv[d].w});
        out.push_back({"dec.conv" + n + ".bias", &dec_conv[d].b});
        out.push_back({"dec.fuse" + n + ".weight", &dec_fuse[d].w});
        out.push_back({"dec.fuse" + n + ".bias", &dec_fuse[d].b});
    }
    out.push_back({"out.conv.weight", &out_conv.w});
    out.push_back({"out.conv.bias", &out_conv.b});
    return out;
}

std::size_t Generator::parameter_count() const {
    std::size_t n = 0;
    for (const auto& stage : enc)
        for (const auto& c : stage) n += c.w.size() + c.b.size();
    for (const auto& c : dec_conv) n += c.w.size() + c.b.size();
    for (const auto& c : dec_fuse) n += c.w.size() + c.b.size();
    n += out_conv.w.size() + out_conv.b.size();
    return n;
}

GeneratorGrads::GeneratorGrads(const Generator& g) {
    const int S = g.spec.stages();
    enc_w.resize(S);
    enc_b.resize(S);
    for (int st = 0; st < S; ++st) {
        for (const auto& c : g.enc[st]) {
            enc_w[st].push_back(Tensor::zeros_like(c.w));
            enc_b[st].push_back(Tensor::zeros_like(c.b));
        }
    }
    for (int d = 0; d < S; ++d) {
        dec_conv_w.push_back(Tensor::zeros_like(g.dec_conv[d].w));
        dec_conv_b.push_back(Tensor::zeros_like(g.dec_conv[d].b));
        dec_fuse_w.push_back(Tensor::zeros_like(g.dec_fuse[d].w));
        dec_fuse_b.push_back(Tensor::zeros_like(g.dec_fuse[d].b));
    }
    out_w = Tensor::zeros_like(g.out_conv.w);
    out_b = Tensor::zeros_like(g.out_conv.b);
}

void GeneratorGrads::zero() {
    for (auto* t : flat()) t->zero();
}

std::vector<Tensor*> GeneratorGrads::flat() {
    std::vector<Tensor*> out;
    for (std::size_t st = 0; st < enc_w.size(); ++st) {
        for (std::size_t i = 0; i < enc_w[st].size(); ++i) {
            out.push_back(&enc_w[st][i]);
            out.push_back(&enc_b[st][i]);
        }
    }
    for (std::size_t d = 0; d < dec_conv_w.size(); ++d) {
        out.push_back(&dec_conv_w[d]);
        out.push_back(&dec_conv_b[d]);
        out.push_back(&dec_fuse_w[d]);
        out.push_back(&dec_fuse_b[d]);
    }
    out.push_back(&out_w);
    out.push_back(&out_b);
    return out;
}

DiscriminatorSpec DiscriminatorSpec::patch70(int in_channels) {
    DiscriminatorSpec s;
    s.in_channels = in_channels;
    return s;
}

int DiscriminatorSpec::receptive_field() const {
    int rf = 1, jump = 1;
    const int L = static_cast<int>(widths.size());
    for (int i = 0; i <= L; ++i) { // feature layers plus the scoring conv
        const int stride = i < L - 1 ? 2 : 1;
        rf += 3 * jump; // kernel 4 everywhere
        jump *= stride;
    }
    return rf;
}

std::string DiscriminatorSpec::arch_string() const {
    std::ostringstream os;
    os << "patch|in=" << in_channels << "|widths=" << join_ints(widths)
       << "|slope=" << leaky_slope;
    return os.str();
}

Discriminator::Discriminator(const DiscriminatorSpec& s, std::uint64_t seed)
    : spec(s) {
    Rng rng(seed);
    const int L = static_cast<int>(spec.widths.size());
    int in_ch = spec.in_channels;
    for (int i = 0; i < L; ++i) {
        const int stride = i < L - 1 ? 2 : 1;
        convs.emplace_back(in_ch, spec.widths[i], 4, stride, 1);
        convs.back().init_gaussian(rng, 0.02f);
        in_ch = spec.widths[i];
    }
    convs.emplace_back(in_ch, 1, 4, 1, 1);
    convs.back().init_gaussian(rng, 0.02f);
}

Tensor Discriminator::forward(const Tensor& x, DiscriminatorActs* acts) const {
    const int L = static_cast<int>(convs.size());
    DiscriminatorActs a;
    a.norm.resize(static_cast<std::size_t>(L) - 2);
    Tensor cur = x;
    for (int i = 0; i < L - 1; ++i) {
        a.conv_in.push_back(std::move(cur));
        Tensor y = convs[i].forward(a.conv_in.back());
        if (i > 0) y = instance_norm(y, &a.norm[i - 1]);
        cur = leaky_relu(y, spec.leaky_slope);
        a.act.push_back(cur);
    }
    a.conv_in.push_back(std::move(cur));
    a.logits = convs[L - 1].forward(a.conv_in.back());
    Tensor out = a.logits;
    if (acts != nullptr) *acts = std::move(a);
    return out;
}

Tensor Discriminator::backward(const DiscriminatorActs& a, const Tensor& dlogits,
                               DiscriminatorGrads* g, bool need_dx) const {
    const int L = static_cast<int>(convs.size());
    Tensor d = convs[L - 1].backward(a.conv_in[L - 1], dlogits,
                                     g ? &g->w[L - 1] : nullptr,
                                     g ? &g->b[L - 1] : nullptr, true);
    for (int i = L - 2; i >= 0; --i) {
        d = leaky_relu_backward(a.act[i], d, spec.leaky_slope);
        if (i > 0) d = instance_norm_backward(a.norm[i - 1], d);
        const bool dx_here = need_dx || i > 0;
        d = convs[i].backward(a.conv_in[i], d, g ? &g->w[i] : nullptr,
                              g ? &g->b[i] : nullptr, dx_here);
    }
    return need_dx ? d : Tensor{};
}

std::vector<ParamRef> Discriminator::parameters() {
    std::vector<ParamRef> out;
    for (std::size_t i = 0; i < convs.size(); ++i) {
        const std::string base = "disc.conv" + std::to_string(i + 1);
        out.push_back({base + ".weight", &convs[i].w});
        out.push_back({base + ".bias", &convs[i].b});
    }
    return out;
}

std::size_t Discriminator::parameter_count() const {
    std::size_t n = 0;
    for (const auto& c : convs) n += c.w.size() + c.b.size();
    return n;
}

DiscriminatorGrads::DiscriminatorGrads(const Discriminator& d) {
    for (const auto& c : d.convs) {
        w.push_back(Tensor::zeros_like(c.w));
        b.push_back(Tensor::zeros_like(c.b));
    }
}

void DiscriminatorGrads::zero() {
    for (auto* t : flat()) t->zero();
}

std::vector<Tensor*> DiscriminatorGrads::flat() {
    std::vector<Tensor*> out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        out.push_back(&w[i]);
        out.push_back(&b[i]);
    }
    return out;
}

std::string ModelBundle::arch_string() const {
    std::string s = "gen{" + generator.spec.arch_string() + "};disc{";
    s += discriminator ? discriminator->spec.arch_string() : "none";
    s += "}";
    return s;
}

std::uint64_t ModelBundle::config_hash() const {
    const std::string s = arch_string();
    return fnv1a64(s.data(), s.size());
}

Generator build_generator(const GeneratorSpec& spec, std::uint64_t seed,
                          const std::optional<std::string>& weights_archive) {
    Generator g(spec, seed);
    if (spec.pretrained) {
        if (!weights_archive)
            throw CheckpointError(
                "pretrained encoder requested but no weights archive given");
        load_vgg16_encoder(g, *weights_archive);
    }
    return g;
}

Discriminator build_discriminator(const DiscriminatorSpec& spec, std::uint64_t seed) {
    return Discriminator(spec, seed);
}

void load_vgg16_encoder(Generator& g, const std::string& archive_path) {
    if (g.spec.arch != GenArch::VGG_UNET)
        throw CheckpointError(
            "pretrained encoder weights only apply to the vgg_unet architecture");
    NamedTensors tensors = read_archive(archive_path);
    auto fetch = [&](const std::string& name, const Tensor& like) -> const Tensor& {
        auto it = tensors.find(name);
        if (it == tensors.end())
            throw CheckpointError("weights archive missing tensor " + name);
        const Tensor& t = it->second;
        if (!t.same_shape(like))
            throw CheckpointError(
                "tensor " + name + " has shape [" + std::to_string(t.n) + "," +
                std::to_string(t.c) + "," + std::to_string(t.h) + "," +
                std::to_string(t.w) + "], expected [" + std::to_string(like.n) +
                "," + std::to_string(like.c) + "," + std::to_string(like.h) + "," +
                std::to_string(like.w) + "]");
        return t;
    };
    for (int st = 0; st < g.spec.stages(); ++st) {
        for (std::size_t i = 0; i < g.enc[st].size(); ++i) {
            const std::string base = "vgg16.conv" + std::to_string(st + 1) + "_" +
                                     std::to_string(i + 1);
            g.enc[st][i].w = fetch(base + ".weight", g.enc[st][i].w);
            g.enc[st][i].b = fetch(base + ".bias", g.enc[st][i].b);
        }
    }
}

Image generator_infer(const Generator& g, const Image& flash) {
    PadInfo info;
    const Image padded = pad_reflect_to_multiple(flash, 32, info);
    const Tensor y = g.forward(image_to_tensor(padded), nullptr);
    return crop_back(tensor_to_image(y, 0), info);
}

} // namespace f2a
