#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "f2a/config.hpp"
#include "f2a/errors.hpp"

using namespace f2a;
namespace fs = std::filesystem;

namespace {

std::string write_cfg(const std::string& tag, const std::string& body) {
    const fs::path dir = fs::temp_directory_path() / "f2a_cfg_tests";
    fs::create_directories(dir);
    const fs::path p = dir / (tag + ".cfg");
    std::ofstream out(p);
    out << body;
    return p.string();
}

} // namespace

TEST_CASE("ablation names round trip") {
    for (const Ablation a : {Ablation::DEFAULT, Ablation::R_PLUS_A,
                             Ablation::R_ONLY, Ablation::UNET_SCRATCH})
        CHECK(ablation_from_string(to_string(a)) == a);
    CHECK_THROWS_AS(ablation_from_string("R_MINUS_A"), DataError);
}

TEST_CASE("loss wiring flags follow the condition") {
    RunConfig cfg;
    cfg.ablation = Ablation::DEFAULT;
    CHECK(cfg.uses_mask());
    CHECK(cfg.uses_discriminator());
    CHECK(cfg.effective_lambda() == 1.0);

    cfg.ablation = Ablation::R_PLUS_A;
    CHECK_FALSE(cfg.uses_mask());
    CHECK(cfg.uses_discriminator());

    cfg.ablation = Ablation::R_ONLY;
    CHECK_FALSE(cfg.uses_mask());
    CHECK_FALSE(cfg.uses_discriminator());
    CHECK(cfg.effective_lambda() == 0.0);

    cfg.ablation = Ablation::UNET_SCRATCH;
    CHECK_FALSE(cfg.uses_mask());
    CHECK_FALSE(cfg.uses_discriminator());
    cfg.unet_adversarial = true;
    CHECK(cfg.uses_discriminator());
    CHECK(cfg.effective_lambda() == 1.0);
}

TEST_CASE("defaults validate cleanly with no warnings") {
    RunConfig cfg;
    cfg.manifest = "whatever.txt";
    const auto warnings = cfg.validate();
    CHECK(warnings.empty());
}

TEST_CASE("a discriminator rate at or above the generator rate warns") {
    RunConfig cfg;
    cfg.lr_discriminator = cfg.lr_generator;
    const auto warnings = cfg.validate();
    REQUIRE_FALSE(warnings.empty());
    bool found = false;
    for (const auto& w : warnings)
        if (w.find("discriminator") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("invalid values are rejected") {
    RunConfig cfg;
    SUBCASE("negative lambda") {
        cfg.lambda = -0.5;
        CHECK_THROWS_AS(cfg.validate(), DataError);
    }
    SUBCASE("zero learning rate") {
        cfg.lr_generator = 0.0;
        CHECK_THROWS_AS(cfg.validate(), DataError);
    }
    SUBCASE("nonpositive crop") {
        cfg.crop = 0;
        CHECK_THROWS_AS(cfg.validate(), DataError);
    }
    SUBCASE("beta out of range") {
        cfg.adam_beta2 = 1.0;
        CHECK_THROWS_AS(cfg.validate(), DataError);
    }
    SUBCASE("negative epochs") {
        cfg.epochs = -1;
        CHECK_THROWS_AS(cfg.validate(), DataError);
    }
}

TEST_CASE("config files apply key = value lines") {
    RunConfig cfg;
    const std::string path = write_cfg("good",
                                       "# training setup\n"
                                       "lambda = 0.5\n"
                                       "lr_generator = 1e-4\n"
                                       "epochs = 12\n"
                                       "ablation = R_PLUS_A\n"
                                       "manifest = data/pairs.txt\n"
                                       "canonical_resize = false\n"
                                       "seed = 1234\n");
    apply_config_file(cfg, path);
    CHECK(cfg.lambda == 0.5);
    CHECK(cfg.lr_generator == 1e-4);
    CHECK(cfg.epochs == 12);
    CHECK(cfg.ablation == Ablation::R_PLUS_A);
    CHECK(cfg.manifest == "data/pairs.txt");
    CHECK_FALSE(cfg.canonical_resize);
    CHECK(cfg.seed == 1234);
    // Untouched keys keep their defaults.
    CHECK(cfg.lr_discriminator == 2e-6);
    CHECK(cfg.batch_size == 1);
}

TEST_CASE("config file errors name the offending line") {
    RunConfig cfg;
    SUBCASE("unknown key") {
        const std::string path = write_cfg("unknown", "lambda = 1\nwat = 7\n");
        CHECK_THROWS_WITH_AS(apply_config_file(cfg, path),
                             doctest::Contains("line 2"), DataError);
    }
    SUBCASE("unparsable number") {
        const std::string path = write_cfg("badnum", "epochs = twelve\n");
        CHECK_THROWS_WITH_AS(apply_config_file(cfg, path),
                             doctest::Contains("line 1"), DataError);
    }
    SUBCASE("trailing junk on a number") {
        const std::string path = write_cfg("junk", "lambda = 1.5x\n");
        CHECK_THROWS_AS(apply_config_file(cfg, path), DataError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(apply_config_file(cfg, "/nonexistent/f2a.cfg"), DataError);
    }
}
