#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "f2a/image.hpp"
#include "f2a/rng.hpp"
#include "oracles.hpp"

using namespace f2a;

TEST_CASE("attention map matches the scalar oracle on random pairs") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Image a = oracle::random_image(rng, 8, 8);
        const Image f = oracle::random_image(rng, 8, 8);
        const AttentionMap got = attention_map(a, f);
        const AttentionMap want = oracle::attention_naive(a, f);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j)
                CHECK(std::fabs(got.at(i, j) - want.at(i, j)) < 1e-12);
    }
}

TEST_CASE("attention map limiting cases") {
    const Image a = Image::constant(4, 4, 3, 0.7);
    SUBCASE("identical images give weight one everywhere") {
        const AttentionMap m = attention_map(a, a);
        for (double v : m.data()) CHECK(v == 1.0);
    }
    SUBCASE("black vs white gives weight zero everywhere") {
        const AttentionMap m = attention_map(Image::constant(4, 4, 3, 0.0),
                                             Image::constant(4, 4, 3, 1.0));
        for (double v : m.data()) CHECK(v == 0.0);
    }
}

TEST_CASE("attention map input validation") {
    const Image a(4, 4, 3);
    CHECK_THROWS_AS(attention_map(a, Image(4, 5, 3)), InvalidPairError);
    CHECK_THROWS_AS(attention_map(a, Image(5, 4, 3)), InvalidPairError);
    Image bad(4, 4, 3);
    bad.at(1, 2, 0) = 1.5;
    CHECK_THROWS_AS(attention_map(a, bad), RangeError);
    bad.at(1, 2, 0) = -0.5;
    CHECK_THROWS_AS(attention_map(bad, a), RangeError);
}

TEST_CASE("apply_attention broadcasts the map over channels") {
    Rng rng(5);
    const Image img = oracle::random_image(rng, 6, 5);
    AttentionMap m(6, 5);
    for (auto& v : m.data()) v = rng.uniform01();
    const Image out = apply_attention(img, m);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 5; ++j)
            for (int k = 0; k < 3; ++k)
                CHECK(out.at(i, j, k) == doctest::Approx(img.at(i, j, k) * m.at(i, j))
                                             .epsilon(1e-12));
}

TEST_CASE("bilinear resize basics") {
    Rng rng(7);
    const Image img = oracle::random_image(rng, 12, 10);
    SUBCASE("same size is the identity") {
        const Image out = resize_bilinear(img, 12, 10);
        for (std::size_t i = 0; i < img.size(); ++i)
            CHECK(out.data()[i] == doctest::Approx(img.data()[i]).epsilon(1e-12));
    }
    SUBCASE("constant images stay constant at any size") {
        const Image c = Image::constant(9, 7, 3, 0.42);
        for (const auto& [h, w] : {std::pair{18, 14}, {5, 3}, {9, 21}}) {
            const Image out = resize_bilinear(c, h, w);
            CHECK(out.height() == h);
            CHECK(out.width() == w);
            for (double v : out.data()) CHECK(v == doctest::Approx(0.42).epsilon(1e-12));
        }
    }
    SUBCASE("output stays inside the input range") {
        const Image out = resize_bilinear(img, 30, 25);
        CHECK(out.in_range());
    }
}

TEST_CASE("canonical resize picks the orientation") {
    const Image landscape(480, 640, 3, 0.5);
    const Image out_l = resize_canonical(landscape);
    CHECK(out_l.height() == kCanonicalShort);
    CHECK(out_l.width() == kCanonicalLong);

    const Image portrait(640, 480, 3, 0.5);
    const Image out_p = resize_canonical(portrait);
    CHECK(out_p.height() == kCanonicalLong);
    CHECK(out_p.width() == kCanonicalShort);

    const Image square(300, 300, 3, 0.5);
    const Image out_s = resize_canonical(square);
    CHECK(out_s.height() == kCanonicalShort);
    CHECK(out_s.width() == kCanonicalLong);
}

TEST_CASE("crop and hflip") {
    Rng rng(3);
    const Image img = oracle::random_image(rng, 8, 9);
    SUBCASE("crop extracts the addressed window") {
        const Image c = crop(img, 2, 3, 4, 5);
        CHECK(c.height() == 4);
        CHECK(c.width() == 5);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 5; ++j)
                for (int k = 0; k < 3; ++k)
                    CHECK(c.at(i, j, k) == img.at(i + 2, j + 3, k));
    }
    SUBCASE("out-of-bounds crop throws") {
        CHECK_THROWS_AS(crop(img, 5, 0, 4, 5), AugmentationError);
        CHECK_THROWS_AS(crop(img, 0, 6, 4, 5), AugmentationError);
        CHECK_THROWS_AS(crop(img, -1, 0, 4, 5), AugmentationError);
    }
    SUBCASE("hflip is an involution") {
        const Image f = hflip(hflip(img));
        for (std::size_t i = 0; i < img.size(); ++i)
            CHECK(f.data()[i] == img.data()[i]);
    }
    SUBCASE("hflip mirrors columns") {
        const Image f = hflip(img);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 9; ++j)
                for (int k = 0; k < 3; ++k)
                    CHECK(f.at(i, j, k) == img.at(i, 8 - j, k));
    }
}

TEST_CASE("paired augmentation applies one geometry to both images") {
    Rng rng(17);
    const Image flash = oracle::random_image(rng, 10, 12);
    const Image ambient = oracle::random_image(rng, 10, 12);
    PairedAugmentation aug;
    aug.crop_row = 1;
    aug.crop_col = 2;
    aug.crop_size = 6;
    aug.hflip = true;
    const auto [fc, ac] = paired_augment(flash, ambient, aug);
    const Image want_f = hflip(crop(flash, 1, 2, 6, 6));
    const Image want_a = hflip(crop(ambient, 1, 2, 6, 6));
    for (std::size_t i = 0; i < want_f.size(); ++i) {
        CHECK(fc.data()[i] == want_f.data()[i]);
        CHECK(ac.data()[i] == want_a.data()[i]);
    }
}

TEST_CASE("paired augmentation rejects impossible requests") {
    const Image flash(8, 8, 3), ambient(8, 8, 3);
    PairedAugmentation aug;
    aug.crop_size = 9;
    CHECK_THROWS_AS(paired_augment(flash, ambient, aug), AugmentationError);
    aug.crop_size = 4;
    CHECK_THROWS_AS(paired_augment(flash, Image(8, 7, 3), aug), InvalidPairError);
}

TEST_CASE("augmentation draw is deterministic and in bounds") {
    const PairedAugmentation a = PairedAugmentation::draw(42, 240, 320, 224);
    const PairedAugmentation b = PairedAugmentation::draw(42, 240, 320, 224);
    CHECK(a.crop_row == b.crop_row);
    CHECK(a.crop_col == b.crop_col);
    CHECK(a.hflip == b.hflip);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const PairedAugmentation d = PairedAugmentation::draw(seed, 240, 320, 224);
        CHECK(d.crop_row >= 0);
        CHECK(d.crop_row <= 240 - 224);
        CHECK(d.crop_col >= 0);
        CHECK(d.crop_col <= 320 - 224);
        CHECK(d.crop_size == 224);
    }
}

TEST_CASE("crop origins cover the lattice roughly uniformly") {
    // 8x8 image, crop 5: a 4x4 origin lattice. Chi-square over 16 cells with
    // 4800 draws; the 99.9% quantile at 15 dof is 37.70.
    const int cells = 16;
    const int draws = 4800;
    std::vector<int> count(cells, 0);
    for (int s = 0; s < draws; ++s) {
        const PairedAugmentation d = PairedAugmentation::draw(1000 + s, 8, 8, 5);
        ++count[d.crop_row * 4 + d.crop_col];
    }
    const double expected = static_cast<double>(draws) / cells;
    double chi2 = 0.0;
    for (int c : count) chi2 += (c - expected) * (c - expected) / expected;
    CHECK(chi2 < 37.70);

    int flips = 0;
    for (int s = 0; s < draws; ++s)
        flips += PairedAugmentation::draw(5000 + s, 8, 8, 5).hflip ? 1 : 0;
    // Fair-coin 99.99% band around draws/2.
    CHECK(std::fabs(flips - draws / 2.0) < 3.9 * std::sqrt(draws * 0.25));
}

TEST_CASE("reflect padding reaches the next multiple and crops back") {
    Rng rng(23);
    const Image img = oracle::random_image(rng, 240, 320);
    PadInfo info;
    const Image padded = pad_reflect_to_multiple(img, 32, info);
    CHECK(padded.height() == 256);
    CHECK(padded.width() == 320);
    CHECK(info.orig_height == 240);
    CHECK(info.orig_width == 320);

    const Image back = crop_back(padded, info);
    CHECK(back.height() == 240);
    CHECK(back.width() == 320);
    for (std::size_t i = 0; i < img.size(); ++i)
        CHECK(back.data()[i] == img.data()[i]);
}

TEST_CASE("reflect padding mirrors without repeating the edge row") {
    Image img(3, 4, 1);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) img.at(i, j, 0) = i * 10 + j;
    PadInfo info;
    const Image padded = pad_reflect_to_multiple(img, 4, info);
    CHECK(padded.height() == 4);
    CHECK(padded.width() == 4);
    // One row added; wherever it sits, the row adjacent to an original edge
    // must mirror the row one step inside that edge.
    const Image back = crop_back(padded, info);
    for (int j = 0; j < 4; ++j) CHECK(back.at(0, j, 0) == img.at(0, j, 0));
    if (info.top > 0) {
        for (int j = 0; j < 4; ++j)
            CHECK(padded.at(info.top - 1, j, 0) == img.at(1, j, 0));
    } else {
        for (int j = 0; j < 4; ++j)
            CHECK(padded.at(3, j, 0) == img.at(1, j, 0));
    }
}

TEST_CASE("already aligned images pass through padding untouched") {
    Rng rng(29);
    const Image img = oracle::random_image(rng, 64, 96);
    PadInfo info;
    const Image padded = pad_reflect_to_multiple(img, 32, info);
    CHECK(padded.height() == 64);
    CHECK(padded.width() == 96);
    for (std::size_t i = 0; i < img.size(); ++i)
        CHECK(padded.data()[i] == img.data()[i]);
}

TEST_CASE("in_range honors the slack") {
    Image img(2, 2, 1, 0.5);
    CHECK(img.in_range());
    img.at(0, 0, 0) = 1.0 + 5e-7;
    CHECK_FALSE(img.in_range());
    CHECK(img.in_range(1e-6));
    img.at(0, 0, 0) = std::nan("");
    CHECK_FALSE(img.in_range(1e-6));
}
