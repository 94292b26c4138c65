#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "f2a/image.hpp"
#include "f2a/layers.hpp"
#include "f2a/tensor.hpp"

namespace f2a {

enum class GenArch { VGG_UNET, UNET_SCRATCH };

// Encoder/decoder structure. The decoder mirrors the encoder: one
// upsample+conv+fuse block per encoder stage, skip concatenation at equal
// resolution. Decoder width at stage s equals the encoder width there, so the
// fuse conv halves the concatenated channel count.
struct GeneratorSpec {
    GenArch arch = GenArch::VGG_UNET;
    std::vector<int> encoder_widths;
    std::vector<int> convs_per_stage;
    float leaky_slope = 0.0f; // 0 selects plain ReLU
    bool pretrained = false;  // encoder expects a weights archive when true

    static GeneratorSpec vgg_unet(bool pretrained);
    static GeneratorSpec unet_scratch();

    int stages() const { return static_cast<int>(encoder_widths.size()); }
    // Identity pairings: encoder stage s feeds decoder stage s.
    std::vector<std::pair<int, int>> skip_connections() const;
    // Canonical description, embedded in checkpoints to detect arch mismatch.
    std::string arch_string() const;
};

struct ParamRef {
    std::string name;
    Tensor* value = nullptr;
};

// Forward intermediates needed by backward. Indexing: encoder arrays by
// stage (0-based, shallow to deep); decoder arrays deepest stage first.
struct GeneratorActs {
    std::vector<Tensor> stage_in;                       // image or pooled input
    std::vector<std::vector<Tensor>> enc_act;           // post-activation
    std::vector<std::vector<std::int32_t>> pool_idx;
    std::vector<std::pair<int, int>> pool_in;           // dims before pooling
    Tensor bottleneck;
    std::vector<Tensor> up_out;   // upsample output = post-up conv input
    std::vector<Tensor> up_act;   // activation after post-up conv
    std::vector<Tensor> cat;      // concat(up_act, skip) = fuse conv input
    std::vector<Tensor> fuse_act; // activation after fuse conv
    Tensor out;                   // sigmoid output
};

struct Generator;

struct GeneratorGrads {
    std::vector<std::vector<Tensor>> enc_w, enc_b;
    std::vector<Tensor> dec_conv_w, dec_conv_b, dec_fuse_w, dec_fuse_b;
    Tensor out_w, out_b;

    GeneratorGrads() = default;
    explicit GeneratorGrads(const Generator& g);
    void zero();
    std::vector<Tensor*> flat(); // same order as Generator::parameters()
};

struct Generator {
    GeneratorSpec spec;
    std::vector<std::vector<Conv2d>> enc; // [stage][conv]
    std::vector<Conv2d> dec_conv;         // deepest first
    std::vector<Conv2d> dec_fuse;
    Conv2d out_conv;

    Generator() = default;
    Generator(const GeneratorSpec& s, std::uint64_t seed);

    // Requires spatial dims divisible by 32; output shape equals input shape,
    // values in (0,1). zero_skips substitutes zeros for the skip tensors and
    // exists for the connectivity property test only.
    Tensor forward(const Tensor& x, GeneratorActs* acts,
                   bool zero_skips = false) const;

    // Accumulates parameter gradients into g; input gradients are not
    // produced (the input is data, not a trainable quantity).
    void backward(const GeneratorActs& acts, const Tensor& dy,
                  GeneratorGrads& g) const;

    std::vector<ParamRef> parameters();
    std::size_t parameter_count() const;
};

struct DiscriminatorSpec {
    int in_channels = 3;
    std::vector<int> widths = {64, 128, 256, 512};
    float leaky_slope = 0.2f;

    static DiscriminatorSpec patch70(int in_channels = 3);

    // Kernel 4 throughout; strides 2,2,2,1 on the feature layers, 1 on the
    // scoring conv. Growth of the receptive field across that stack.
    int receptive_field() const;
    std::string arch_string() const;
};

struct DiscriminatorActs {
    std::vector<Tensor> conv_in; // input to conv i
    std::vector<Tensor> act;     // post-activation per feature layer
    std::vector<InstanceNormCache> norm; // layers 1..3
    Tensor logits;
};

struct Discriminator;

struct DiscriminatorGrads {
    std::vector<Tensor> w, b;

    DiscriminatorGrads() = default;
    explicit DiscriminatorGrads(const Discriminator& d);
    void zero();
    std::vector<Tensor*> flat();
};

struct Discriminator {
    DiscriminatorSpec spec;
    std::vector<Conv2d> convs; // feature layers + final 1-channel scorer

    Discriminator() = default;
    Discriminator(const DiscriminatorSpec& s, std::uint64_t seed);

    // Returns raw logits [N,1,h,w]; apply a logistic map for probabilities.
    Tensor forward(const Tensor& x, DiscriminatorActs* acts) const;

    // dlogits is the gradient at the logits. When g is non-null parameter
    // gradients are accumulated; when need_dx the input gradient is returned
    // (used to propagate the adversarial term into the generator).
    Tensor backward(const DiscriminatorActs& acts, const Tensor& dlogits,
                    DiscriminatorGrads* g, bool need_dx) const;

    std::vector<ParamRef> parameters();
    std::size_t parameter_count() const;
};

struct TrainingMeta {
    std::int64_t epoch = 0;
    std::int64_t step = 0;
    std::uint64_t seed = 0;
    std::string ablation = "DEFAULT";
};

// A generator plus (optionally) its discriminator. The R_ONLY ablation trains
// and checkpoints without a discriminator; absence is a valid state.
struct ModelBundle {
    Generator generator;
    std::optional<Discriminator> discriminator;
    TrainingMeta meta;

    std::string arch_string() const;
    std::uint64_t config_hash() const;
};

// Builds the generator; when spec.pretrained, loads the 13 VGG-16 encoder
// convolutions from the archive (tensors vgg16.conv{stage}_{index}.weight /
// .bias) and errors naming any missing or misshapen tensor.
Generator build_generator(const GeneratorSpec& spec, std::uint64_t seed,
                          const std::optional<std::string>& weights_archive = {});

Discriminator build_discriminator(const DiscriminatorSpec& spec, std::uint64_t seed);

void load_vgg16_encoder(Generator& g, const std::string& archive_path);

// Full-image inference: mirror-pads to the next multiple of 32, runs the
// generator, crops back to the original size.
Image generator_infer(const Generator& g, const Image& flash);

} // namespace f2a
