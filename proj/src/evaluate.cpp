#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "f2a/data.hpp"
#include "f2a/errors.hpp"
#include "f2a/image_io.hpp"
#include "f2a/metrics.hpp"
#include "f2a/networks.hpp"

namespace f2a {

namespace {

std::string fmt4(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

} // namespace

std::string EvalReport::render_table(const std::string& method_name) const {
    std::ostringstream os;
    os << "Method                     PSNR (dB)    SSIM\n";
    os << "-----------------------------------------------\n";
    char row[160];
    std::snprintf(row, sizeof row, "%-25s %9s  %6s\n", method_name.c_str(),
                  fmt4(mean_psnr).c_str(), fmt4(mean_ssim).c_str());
    os << row;
    return os.str();
}

void EvalReport::write(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write report to " + path);
    out << "# pair_id psnr_db ssim\n";
    for (const auto& r : per_image)
        out << r.pair_id << " " << fmt4(r.psnr_db) << " " << fmt4(r.ssim) << "\n";
    out << "# summary\n";
    out << "# images " << per_image.size() << "\n";
    out << "# mean_psnr " << fmt4(mean_psnr) << "\n";
    out << "# mean_ssim " << fmt4(mean_ssim) << "\n";
    out << "# infinite_psnr_excluded " << infinite_psnr_count << "\n";
    out << "# errors " << errors.size() << "\n";
    for (const auto& e : errors) out << "# error " << e << "\n";
    out.flush();
    if (!out) throw DataError("write failed for " + path);
}

EvalReport evaluate(const DatasetManifest& manifest, const ForwardFn& model,
                    const EvalOptions& opts) {
    std::vector<std::size_t> idx = manifest.split_indices("test");
    if (idx.empty()) throw DataError("cannot evaluate: test split is empty");
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return manifest.entries[a].pair_id < manifest.entries[b].pair_id;
    });
    EvalReport rep;
    double psnr_sum = 0.0, ssim_sum = 0.0;
    int finite_psnr = 0;
    for (std::size_t i : idx) {
        const ManifestEntry& e = manifest.entries[i];
        try {
            Image flash = load_image(e.flash_path);
            Image ambient = load_image(e.ambient_path);
            if (opts.canonical_resize) {
                flash = resize_canonical(flash);
                ambient = resize_canonical(ambient);
            }
            if (!flash.same_shape(ambient))
                throw DataError("flash/ambient shape mismatch");
            const Image out = model(flash);
            EvalRecord r;
            r.pair_id = e.pair_id;
            r.psnr_db = psnr(ambient, out);
            r.ssim = ssim(ambient, out);
            if (std::isinf(r.psnr_db)) {
                ++rep.infinite_psnr_count;
            } else {
                psnr_sum += r.psnr_db;
                ++finite_psnr;
            }
            ssim_sum += r.ssim;
            rep.per_image.push_back(std::move(r));
        } catch (const std::exception& ex) {
            rep.errors.push_back(e.pair_id + ": " + ex.what());
        }
    }
    if (rep.per_image.empty())
        throw DataError("evaluation produced no results; " +
                        std::to_string(rep.errors.size()) + " item(s) failed");
    if (rep.infinite_psnr_count > 0)
        std::clog << "warning: " << rep.infinite_psnr_count
                  << " pair(s) had zero MSE; their infinite PSNR is excluded "
                     "from the mean\n";
    rep.mean_psnr = finite_psnr > 0 ? psnr_sum / finite_psnr
                                    : std::numeric_limits<double>::infinity();
    rep.mean_ssim = ssim_sum / static_cast<double>(rep.per_image.size());
    if (!rep.errors.empty())
        std::clog << "warning: " << rep.errors.size()
                  << " evaluation item(s) skipped due to errors\n";
    return rep;
}

EvalReport evaluate(const DatasetManifest& manifest, const ModelBundle& bundle,
                    const EvalOptions& opts) {
    return evaluate(
        manifest,
        [&](const Image& flash) { return generator_infer(bundle.generator, flash); },
        opts);
}

} // namespace f2a
