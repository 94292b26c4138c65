#include "f2a/data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "f2a/errors.hpp"
#include "f2a/image_io.hpp"
#include "f2a/rng.hpp"

namespace fs = std::filesystem;

namespace f2a {

int DatasetManifest::count(const std::string& split) const {
    int n = 0;
    for (const auto& e : entries)
        if (e.split == split) ++n;
    return n;
}

std::vector<std::size_t> DatasetManifest::split_indices(const std::string& split) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].split == split) out.push_back(i);
    return out;
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest " + path);
    DatasetManifest m;
    m.base_dir = fs::path(path).parent_path().string();
    auto resolve = [&](const std::string& p) {
        if (fs::path(p).is_absolute() || m.base_dir.empty()) return p;
        return (fs::path(m.base_dir) / p).string();
    };
    std::set<std::string> seen_ids;
    std::vector<std::string> missing;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        ManifestEntry e;
        if (!(ls >> e.pair_id)) continue; // blank or comment-only
        std::string extra;
        if (!(ls >> e.flash_path >> e.ambient_path >> e.category >> e.split) ||
            (ls >> extra))
            throw DataError("manifest parse error at line " +
                            std::to_string(lineno) +
                            ": expected 5 whitespace-separated fields");
        if (std::find(kCategories.begin(), kCategories.end(), e.category) ==
            kCategories.end())
            throw DataError("manifest line " + std::to_string(lineno) +
                            ": unknown category '" + e.category + "'");
        if (e.split != "train" && e.split != "test")
            throw DataError("manifest line " + std::to_string(lineno) +
                            ": split must be 'train' or 'test', got '" + e.split +
                            "'");
        if (!seen_ids.insert(e.pair_id).second)
            throw DataError("duplicate pair_id '" + e.pair_id + "' at line " +
                            std::to_string(lineno));
        e.flash_path = resolve(e.flash_path);
        e.ambient_path = resolve(e.ambient_path);
        for (const auto& p : {e.flash_path, e.ambient_path})
            if (!fs::exists(p)) missing.push_back(p);
        m.entries.push_back(std::move(e));
    }
    if (!missing.empty()) {
        std::string msg = "manifest references " + std::to_string(missing.size()) +
                          " missing file(s):";
        for (std::size_t i = 0; i < missing.size() && i < 10; ++i)
            msg += " " + missing[i];
        if (missing.size() > 10) msg += " ...";
        throw DataError(msg);
    }
    std::clog << "manifest " << path << ": " << m.count("train") << " train / "
              << m.count("test") << " test\n";
    return m;
}

std::uint64_t sample_seed(std::uint64_t seed, std::int64_t epoch, std::size_t index) {
    return mix_seed(seed, static_cast<std::uint64_t>(epoch) + 1, index + 1,
                    0x73616d70ULL);
}

TrainingSample assemble_sample(const Image& flash, const Image& ambient,
                               const std::string& pair_id,
                               const PairedAugmentation& aug) {
    TrainingSample s;
    auto [fc, ac] = paired_augment(flash, ambient, aug);
    s.flash_crop = std::move(fc);
    s.ambient_crop = std::move(ac);
    s.attention = attention_map(s.ambient_crop, s.flash_crop);
    s.pair_id = pair_id;
    s.augmentation = aug;
    return s;
}

TrainingSample make_training_sample(const ManifestEntry& entry,
                                    std::uint64_t seed, std::int64_t epoch,
                                    std::size_t index, int crop,
                                    bool canonical_resize) {
    Image flash, ambient;
    try {
        flash = load_image(entry.flash_path);
        ambient = load_image(entry.ambient_path);
    } catch (const Error& e) {
        throw DataError("pair " + entry.pair_id + ": " + e.what());
    }
    if (canonical_resize) {
        flash = f2a::resize_canonical(flash);
        ambient = f2a::resize_canonical(ambient);
    }
    if (!flash.same_shape(ambient))
        throw DataError("pair " + entry.pair_id + ": flash is " +
                        std::to_string(flash.height()) + "x" +
                        std::to_string(flash.width()) + " but ambient is " +
                        std::to_string(ambient.height()) + "x" +
                        std::to_string(ambient.width()));
    PairedAugmentation aug;
    try {
        aug = PairedAugmentation::draw(sample_seed(seed, epoch, index),
                                       flash.height(), flash.width(), crop);
    } catch (const Error& e) {
        throw DataError("pair " + entry.pair_id + ": " + e.what());
    }
    return assemble_sample(flash, ambient, entry.pair_id, aug);
}

std::vector<std::size_t> epoch_permutation(std::size_t n, std::uint64_t seed,
                                           std::int64_t epoch) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(mix_seed(seed, 0x73687566ULL, static_cast<std::uint64_t>(epoch)));
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.bounded(i);
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

std::pair<Image, Image> synth_pair(
    const SynthSceneSpec& spec,
    std::vector<std::array<double, 2>>* shadow_centroids) {
    const int H = spec.height, W = spec.width;
    if (H < 2 || W < 2) throw DataError("synth scene smaller than 2x2");
    Rng rng(spec.seed);

    constexpr int kWaves = 4;
    struct Wave { double fx, fy, phase, amp[3]; };
    std::array<Wave, kWaves> waves;
    double amp_sum[3] = {0, 0, 0};
    for (auto& wv : waves) {
        wv.fx = rng.uniform(0.5, 2.5);
        wv.fy = rng.uniform(0.5, 2.5);
        wv.phase = rng.uniform(0.0, 6.283185307179586);
        for (int c = 0; c < 3; ++c) {
            wv.amp[c] = rng.uniform(0.3, 1.0);
            amp_sum[c] += wv.amp[c];
        }
    }

    struct Tri { double x[3], y[3]; };
    std::vector<Tri> tris;
    for (int t = 0; t < spec.shadow_polygons; ++t) {
        Tri tri;
        for (int v = 0; v < 3; ++v) {
            tri.x[v] = rng.uniform(0.1, 0.9) * W;
            tri.y[v] = rng.uniform(0.1, 0.9) * H;
        }
        tris.push_back(tri);
        if (shadow_centroids != nullptr)
            shadow_centroids->push_back(
                {(tri.y[0] + tri.y[1] + tri.y[2]) / 3.0,
                 (tri.x[0] + tri.x[1] + tri.x[2]) / 3.0});
    }
    auto inside = [](const Tri& t, double px, double py) {
        double s[3];
        for (int v = 0; v < 3; ++v) {
            const int u = (v + 1) % 3;
            s[v] = (t.x[u] - t.x[v]) * (py - t.y[v]) -
                   (t.y[u] - t.y[v]) * (px - t.x[v]);
        }
        return (s[0] >= 0 && s[1] >= 0 && s[2] >= 0) ||
               (s[0] <= 0 && s[1] <= 0 && s[2] <= 0);
    };

    const double cx = (W - 1) / 2.0, cy = (H - 1) / 2.0;
    const double half_diag = std::sqrt(cx * cx + cy * cy);
    Image ambient(H, W, 3), flash(H, W, 3);
    for (int i = 0; i < H; ++i) {
        for (int j = 0; j < W; ++j) {
            double gain = 1.0;
            if (spec.flash_falloff) {
                const double r = std::sqrt((j - cx) * (j - cx) + (i - cy) * (i - cy)) /
                                 half_diag;
                gain = spec.flash_edge_gain +
                       (spec.flash_center_gain - spec.flash_edge_gain) *
                           std::exp(-r * r / (2.0 * spec.flash_sigma * spec.flash_sigma));
            }
            bool shadowed = false;
            for (const auto& t : tris)
                if (inside(t, j, i)) { shadowed = true; break; }
            for (int c = 0; c < 3; ++c) {
                double s = 0.0;
                for (const auto& wv : waves)
                    s += wv.amp[c] * std::sin(6.283185307179586 *
                                                  (wv.fx * j / W + wv.fy * i / H) +
                                              wv.phase);
                const double a = 0.2 + 0.65 * (s + amp_sum[c]) / (2.0 * amp_sum[c]);
                ambient.at(i, j, c) = a;
                double f = a * gain;
                if (f > 1.0) f = 1.0;
                if (shadowed) f *= 0.25;
                flash.at(i, j, c) = f;
            }
        }
    }
    if (spec.noise_level > 0.0) {
        for (auto& v : flash.data()) {
            v += rng.uniform(-spec.noise_level, spec.noise_level);
            v = std::clamp(v, 0.0, 1.0);
        }
    }
    return {std::move(flash), std::move(ambient)};
}

std::string write_synth_dataset(const std::string& dir, int n_train, int n_test,
                                const SynthSceneSpec& base) {
    fs::create_directories(dir);
    const std::string manifest_path = (fs::path(dir) / "manifest.txt").string();
    std::ofstream mf(manifest_path, std::ios::trunc);
    if (!mf) throw DataError("cannot write " + manifest_path);
    mf << "# pair_id flash_path ambient_path category split\n";
    auto emit = [&](const std::string& split, int count, std::uint64_t tag) {
        for (int i = 0; i < count; ++i) {
            SynthSceneSpec s = base;
            s.seed = mix_seed(base.seed, tag, static_cast<std::uint64_t>(i));
            auto [flash, ambient] = synth_pair(s);
            std::ostringstream stem;
            stem << split << "_" << std::setw(4) << std::setfill('0') << i;
            const std::string f_name = stem.str() + "_f.png";
            const std::string a_name = stem.str() + "_a.png";
            save_image((fs::path(dir) / f_name).string(), flash);
            save_image((fs::path(dir) / a_name).string(), ambient);
            mf << "synth_" << stem.str() << " " << f_name << " " << a_name << " "
               << kCategories[static_cast<std::size_t>(i) % kCategories.size()]
               << " " << split << "\n";
        }
    };
    emit("train", n_train, 1);
    emit("test", n_test, 2);
    mf.flush();
    if (!mf) throw DataError("write failed for " + manifest_path);
    return manifest_path;
}

} // namespace f2a
