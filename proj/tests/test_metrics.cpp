#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "f2a/data.hpp"
#include "f2a/image.hpp"
#include "f2a/metrics.hpp"
#include "f2a/rng.hpp"
#include "oracles.hpp"

using namespace f2a;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("f2a_metrics_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("psnr analytic cases") {
    Rng rng(1);
    const Image a = oracle::random_image(rng, 16, 16);
    CHECK(std::isinf(psnr(a, a)));
    CHECK(psnr(a, a) > 0);
}

TEST_CASE("psnr closed forms") {
    const Image x = Image::constant(16, 16, 3, 0.25);
    const Image y = Image::constant(16, 16, 3, 0.75);
    CHECK(std::fabs(psnr(x, y) - 6.0206) < 1e-4);
    CHECK(psnr(x, y) == psnr(y, x));

    // One pixel-channel off by 0.3 in a 4x4x3 image: MSE = 0.09 / 48.
    Image u(4, 4, 3, 0.5), v(4, 4, 3, 0.5);
    v.at(2, 1, 0) += 0.3;
    const double mse = 0.09 / 48.0;
    CHECK(psnr(u, v) == doctest::Approx(10.0 * std::log10(1.0 / mse)).epsilon(1e-12));
}

TEST_CASE("psnr rejects mismatched shapes") {
    CHECK_THROWS_AS(psnr(Image(8, 8, 3), Image(8, 9, 3)), InvalidPairError);
}

TEST_CASE("ssim analytic cases") {
    Rng rng(2);
    const Image a = oracle::random_image(rng, 16, 20);
    SUBCASE("self similarity is one") {
        CHECK(std::fabs(ssim(a, a) - 1.0) < 1e-9);
    }
    SUBCASE("constant pair matches the zero-variance closed form") {
        const double va = 0.3, vb = 0.8;
        const Image x = Image::constant(16, 16, 3, va);
        const Image y = Image::constant(16, 16, 3, vb);
        CHECK(std::fabs(ssim(x, y) - oracle::ssim_constant(va, vb)) < 1e-6);
    }
    SUBCASE("noise strictly lowers similarity") {
        Image noisy = a;
        Rng nr(3);
        for (auto& v : noisy.data()) {
            v += nr.uniform(-0.2, 0.2);
            v = std::min(1.0, std::max(0.0, v));
        }
        const double s = ssim(a, noisy);
        CHECK(s < 0.999);
        CHECK(s >= -1.0);
        CHECK(s <= 1.0);
    }
}

TEST_CASE("ssim is symmetric") {
    Rng rng(4);
    const Image a = oracle::random_image(rng, 14, 14);
    const Image b = oracle::random_image(rng, 14, 14);
    CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-12));
}

TEST_CASE("ssim needs at least one full window") {
    CHECK_THROWS_AS(ssim(Image(10, 16, 3), Image(10, 16, 3)), InvalidPairError);
    CHECK_THROWS_AS(ssim(Image(16, 10, 3), Image(16, 10, 3)), InvalidPairError);
    CHECK_NOTHROW(ssim(Image(11, 11, 3, 0.5), Image(11, 11, 3, 0.5)));
}

TEST_CASE("evaluate on a flash==ambient dataset with the identity model") {
    const fs::path dir = fresh_dir("identity");
    SynthSceneSpec spec;
    spec.seed = 9;
    spec.height = 48;
    spec.width = 64;
    spec.shadow_polygons = 0;
    spec.flash_falloff = false; // degrades to flash == ambient
    const std::string manifest_path =
        write_synth_dataset(dir.string(), 2, 3, spec);
    const DatasetManifest manifest = load_manifest(manifest_path);

    EvalOptions opts;
    opts.canonical_resize = false;
    const EvalReport report =
        evaluate(manifest, [](const Image& img) { return img; }, opts);

    CHECK(report.per_image.size() == 3);
    CHECK(report.errors.empty());
    CHECK(report.mean_ssim == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(report.infinite_psnr_count == 3);
    CHECK(std::isinf(report.mean_psnr));

    SUBCASE("per-image rows are sorted by pair id") {
        for (std::size_t i = 1; i < report.per_image.size(); ++i)
            CHECK(report.per_image[i - 1].pair_id < report.per_image[i].pair_id);
    }
    SUBCASE("report file round trips the summary") {
        const fs::path rp = dir / "report.txt";
        report.write(rp.string());
        std::ifstream in(rp);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        CHECK(text.find("# pair_id psnr_db ssim") != std::string::npos);
        CHECK(text.find("synth_test_0000") != std::string::npos);
        CHECK(text.find("mean_ssim") != std::string::npos);
    }
    SUBCASE("summary table renders a header and one method row") {
        const std::string table = report.render_table("identity");
        CHECK(table.find("Method") != std::string::npos);
        CHECK(table.find("PSNR (dB)") != std::string::npos);
        CHECK(table.find("SSIM") != std::string::npos);
        CHECK(table.find("identity") != std::string::npos);
        CHECK(table.find("1.0000") != std::string::npos);
    }
}

TEST_CASE("evaluate reports finite means on a non-degenerate dataset") {
    const fs::path dir = fresh_dir("textured");
    SynthSceneSpec spec;
    spec.seed = 21;
    spec.height = 48;
    spec.width = 64;
    const std::string manifest_path =
        write_synth_dataset(dir.string(), 1, 4, spec);
    const DatasetManifest manifest = load_manifest(manifest_path);

    EvalOptions opts;
    opts.canonical_resize = false;
    const EvalReport report =
        evaluate(manifest, [](const Image& img) { return img; }, opts);
    CHECK(report.per_image.size() == 4);
    CHECK(report.infinite_psnr_count == 0);
    CHECK(std::isfinite(report.mean_psnr));
    CHECK(report.mean_psnr > 0.0);
    CHECK(report.mean_ssim > -1.0);
    CHECK(report.mean_ssim < 1.0);

    double psum = 0.0, ssum = 0.0;
    for (const auto& r : report.per_image) {
        psum += r.psnr_db;
        ssum += r.ssim;
    }
    CHECK(report.mean_psnr == doctest::Approx(psum / 4.0).epsilon(1e-12));
    CHECK(report.mean_ssim == doctest::Approx(ssum / 4.0).epsilon(1e-12));
}

TEST_CASE("evaluate with an empty test split fails loudly") {
    const fs::path dir = fresh_dir("empty");
    SynthSceneSpec spec;
    spec.seed = 1;
    spec.height = 48;
    spec.width = 64;
    const std::string manifest_path = write_synth_dataset(dir.string(), 2, 0, spec);
    const DatasetManifest manifest = load_manifest(manifest_path);
    EvalOptions opts;
    opts.canonical_resize = false;
    CHECK_THROWS_AS(evaluate(manifest, [](const Image& img) { return img; }, opts),
                    DataError);
}

TEST_CASE("evaluate skips broken items and records the error") {
    const fs::path dir = fresh_dir("broken");
    SynthSceneSpec spec;
    spec.seed = 3;
    spec.height = 48;
    spec.width = 64;
    const std::string manifest_path = write_synth_dataset(dir.string(), 1, 2, spec);
    DatasetManifest manifest = load_manifest(manifest_path);
    // Corrupt one test image after the existence check at load time.
    for (const auto& e : manifest.entries)
        if (e.split == "test" && e.pair_id == "synth_test_0001") {
            std::ofstream out(e.flash_path, std::ios::trunc | std::ios::binary);
            out << "not a png";
        }
    EvalOptions opts;
    opts.canonical_resize = false;
    const EvalReport report =
        evaluate(manifest, [](const Image& img) { return img; }, opts);
    CHECK(report.per_image.size() == 1);
    REQUIRE(report.errors.size() == 1);
    CHECK(report.errors[0].find("synth_test_0001") != std::string::npos);
}
