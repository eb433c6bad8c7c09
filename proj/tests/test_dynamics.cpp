#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <random>

#include "doctest.h"
#include "semidyn/dynamics.hpp"

using namespace semidyn;
using namespace semidyn::dyn;

namespace {

GridSpec unit_grid(int n) {
    GridSpec g;
    g.center = {0, 0};
    g.width = g.height = 4;
    g.cols = g.rows = n;
    return g;
}

words::Alphabet cyc() { return words::Alphabet({0}, {"f"}, true); }

}  // namespace

TEST_CASE("grid geometry: orientation and inverse") {
    auto g = unit_grid(8);
    CHECK(g.point_at(0, 0).imag() > g.point_at(7, 0).imag());  // top row on top
    CHECK(g.point_at(0, 0).real() < g.point_at(0, 7).real());
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            int ri, rj;
            REQUIRE(g.pixel_of(g.point_at(i, j), ri, rj));
            CHECK(ri == i);
            CHECK(rj == j);
        }
    int r, c;
    CHECK_FALSE(g.pixel_of({10, 0}, r, c));

    GridSpec big = g;
    big.cols = big.rows = 5000;  // 25e6 > 2^24
    CHECK_THROWS_AS(big.validate(), ResourceCapError);
}

TEST_CASE("pgm round trip is bit exact") {
    auto g = unit_grid(16);
    Mask m(g, Mask::Tag::Custom);
    std::mt19937 rng(3u);
    for (auto& b : m.bits) b = rng() & 1;
    std::string path = "tmp_mask.pgm";
    write_pgm(m, path);
    auto back = read_pgm(path);
    CHECK(back.bits == m.bits);
    CHECK(back.grid.cols == 16);
    std::remove(path.c_str());
}

TEST_CASE("word budget: equal generator-application depth") {
    auto b = WordBudget::enumerate(cyc(), 3, 100, 1e10);
    REQUIRE(b.word_list.size() == 3);
    CHECK(b.steps_for(0) == 100);  // f
    CHECK(b.steps_for(1) == 50);   // f.f
    CHECK(b.steps_for(2) == 33);   // f.f.f
    b.steps_per_word = {7, 7, 7};
    CHECK(b.steps_for(2) == 7);
}

TEST_CASE("escaping mask: doubling map leaves a bounded core") {
    auto g = unit_grid(64);
    auto gen = fx::parse_formula("2*z");
    auto budget = WordBudget::enumerate(cyc(), 2, 100, 1e3);
    auto res = escaping_mask({gen}, g, budget, 1);
    // only the exact origin pixel grid has |z|>0; every point eventually escapes
    CHECK(res.i_mask.count() == 64 * 64);
    CHECK(res.cube.escaped.size() == 2);

    // intersect of a strict subset can only grow the mask
    auto one = res.cube.intersect({0});
    CHECK(mask_subset_violations(res.i_mask, one) == 0);
}

TEST_CASE("escaping mask is schedule independent") {
    auto g = unit_grid(33);  // odd size: uneven row partitions
    auto gen = fx::parse_formula("exp(z)");
    auto budget = WordBudget::enumerate(cyc(), 3, 60, 1e10);
    auto base = escaping_mask({gen}, g, budget, 1);
    for (int threads : {2, 4, 8}) {
        auto other = escaping_mask({gen}, g, budget, threads);
        CHECK(other.i_mask.bits == base.i_mask.bits);
        CHECK(other.cube.escaped == base.cube.escaped);
    }
}

TEST_CASE("morphology: F/J partition and two-sided boundary agree") {
    auto g = unit_grid(32);
    std::mt19937 rng(11u);
    for (int trial = 0; trial < 20; ++trial) {
        Mask i_mask(g, Mask::Tag::IApprox);
        for (auto& b : i_mask.bits) b = rng() & 1;
        auto fj = fatou_julia_masks(i_mask);
        auto j2 = boundary_of_complement(i_mask);
        CHECK(fj.j_mask.bits == j2.bits);
        for (int i = 0; i < g.rows; ++i)
            for (int j = 0; j < g.cols; ++j) {
                bool frame = i == 0 || j == 0 || i == g.rows - 1 || j == g.cols - 1;
                int covered = fj.f_mask.at(i, j) + fj.j_mask.at(i, j);
                CHECK(covered == (frame ? 0 : 1));
            }
    }
}

TEST_CASE("mask comparison metrics") {
    auto g = unit_grid(4);
    Mask a(g, Mask::Tag::Custom), b(g, Mask::Tag::Custom);
    a.at(1, 1) = 1;
    a.at(1, 2) = 1;
    b.at(1, 2) = 1;
    b.at(2, 2) = 1;
    auto c = mask_compare(a, b);
    CHECK(c.jaccard == doctest::Approx(1.0 / 3.0));
    CHECK(c.a_minus_b == 1);
    CHECK(c.b_minus_a == 1);
    CHECK(mask_compare(Mask(g, Mask::Tag::Custom), Mask(g, Mask::Tag::Custom)).jaccard == 1.0);

    auto g2 = unit_grid(5);
    CHECK_THROWS_AS(mask_compare(a, Mask(g2, Mask::Tag::Custom)), GridMismatchError);
}

TEST_CASE("component labeling: 4-connectivity, row-major label order") {
    auto g = unit_grid(6);
    Mask f(g, Mask::Tag::FApprox);
    // two blobs touching only diagonally stay separate components
    f.at(1, 1) = f.at(1, 2) = f.at(2, 1) = 1;
    f.at(3, 3) = f.at(3, 4) = f.at(4, 4) = 1;
    f.at(2, 2) = 0;
    auto cm = label_components(f);
    CHECK(cm.n_components == 2);
    CHECK(cm.at(1, 1) == 1);
    CHECK(cm.at(3, 3) == 2);
    CHECK(cm.at(0, 0) == 0);
}

TEST_CASE("component image under identity and escaping maps") {
    auto g = unit_grid(32);
    Mask f(g, Mask::Tag::FApprox);
    for (int i = 4; i < 16; ++i)
        for (int j = 4; j < 16; ++j) f.at(i, j) = 1;
    auto cm = label_components(f);
    REQUIRE(cm.n_components == 1);

    auto ident = fx::parse_formula("z");
    auto img = component_image(1, *ident, cm, 32);
    CHECK(img.kind == ComponentImage::Kind::Target);
    CHECK(img.target_label == 1);

    auto away = fx::parse_formula("z+100");  // off-window
    CHECK(component_image(1, *away, cm, 32).kind == ComponentImage::Kind::OffGrid);

    CHECK_THROWS_AS(component_image(1, *ident, cm, 8), Error);   // too few samples
    CHECK_THROWS_AS(component_image(9, *ident, cm, 32), Error);  // unknown label
}

TEST_CASE("stabilizer probe records identity-stable components") {
    auto g = unit_grid(32);
    auto alpha = cyc();
    Mask f(g, Mask::Tag::FApprox);
    for (int i = 4; i < 16; ++i)
        for (int j = 4; j < 16; ++j) f.at(i, j) = 1;
    auto cm = label_components(f);
    auto budget = WordBudget::enumerate(alpha, 3, 10, 1e10);
    auto entries = stabilizer_probe(alpha, cm, {fx::parse_formula("z")}, budget, 32);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].stabilizing_words.size() == budget.word_list.size());
    CHECK(entries[0].closure_violations.empty());
}
