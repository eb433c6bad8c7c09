#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "semidyn/config.hpp"

using namespace semidyn;
using namespace semidyn::cfg;

namespace {

const char* kMinimal = R"(
# a comment
[semigroup s]
abelian = true
gen f = exp(z)

[grid main]
center = 1+2i
width = 6
height = 6
cols = 32
rows = 32

[budget b]
max_word_len = 2
max_steps = 50
escape_radius = 1e10

[oracle even]
semigroup = s
type = generated_by
words = f.f
closure_bound = 6

[experiment e]
kind = boundary_identity
semigroup = s
grid = main
budget = b

[suite all]
experiments = e

[output]
directory = results
)";

}  // namespace

TEST_CASE("parse a complete configuration") {
    auto c = parse_config_text(kMinimal);
    CHECK(c.semigroup("s").abelian);
    CHECK(c.semigroup("s").formulas == std::vector<std::string>{"exp(z)"});
    CHECK(c.grid("main").spec.center == fx::cplx{1, 2});
    CHECK(c.grid("main").spec.cols == 32);
    CHECK(c.budget("b").escape_radius == 1e10);
    CHECK(c.oracle("even").words == std::vector<std::string>{"f.f"});
    CHECK(c.experiment("e").kind == "boundary_identity");
    CHECK(c.suite("all").experiments == std::vector<std::string>{"e"});
    CHECK(c.output_dir == "results");
    CHECK_THROWS_AS(c.grid("nope"), Error);
}

TEST_CASE("parse errors carry line numbers") {
    auto expect_line = [](const std::string& text, int line) {
        try {
            parse_config_text(text);
            FAIL("expected ParseError for: ", text);
        } catch (const ParseError& e) {
            CHECK(e.line == line);
            CHECK(std::string(e.what()).find("line " + std::to_string(line)) !=
                  std::string::npos);
        }
    };
    expect_line("key = 1\n", 1);                       // key outside section
    expect_line("[grid g]\ncenter = z\n", 2);          // non-constant complex
    expect_line("[grid g]\ncols = many\n", 2);         // bad integer
    expect_line("\n[what x]\n", 2);                    // unknown section kind
    expect_line("[semigroup s]\nnope = 1\n", 2);       // unknown key
    expect_line("[grid g\n", 1);                       // unterminated header
    expect_line("[semigroup s]\nabelian = maybe\n", 2);
    expect_line("[experiment e]\nregion = disk 1\n", 2);
}

TEST_CASE("cross references are validated") {
    CHECK_THROWS_AS(parse_config_text("[oracle o]\nsemigroup = ghost\ntype = prefix_is\n"
                                      "letter = f\n"),
                    Error);
    CHECK_THROWS_AS(parse_config_text("[semigroup s]\ngen f = z\n"
                                      "[experiment e]\nkind = x\nsemigroup = s\ngrid = ghost\n"),
                    Error);
    CHECK_THROWS_AS(parse_config_text("[suite q]\nexperiments = ghost\n"), Error);
}

TEST_CASE("round trip: serialize o parse is the identity on bytes") {
    auto c1 = parse_config_text(kMinimal);
    auto text1 = serialize(c1);
    auto c2 = parse_config_text(text1);
    auto text2 = serialize(c2);
    CHECK(text1 == text2);
}

TEST_CASE("bundled configurations parse and round trip") {
    for (const char* name : {"/lab.cfg", "/paper_examples.cfg"}) {
        auto c = parse_config_file(std::string(SEMIDYN_CONFIG_DIR) + name);
        auto text = serialize(c);
        auto c2 = parse_config_text(text);
        CHECK(serialize(c2) == text);
    }
}

TEST_CASE("builders resolve names into runnable objects") {
    auto c = parse_config_text(kMinimal);
    auto s = build_semigroup(c, "s");
    CHECK(s.alphabet.size() == 1);
    CHECK(s.generators[0]->eval({0, 0}).real() == 1.0);

    auto oracle = build_oracle(c, "even", s.alphabet);
    CHECK(oracle->contains(parse_word(s.alphabet, "f.f")));
    CHECK_FALSE(oracle->contains(parse_word(s.alphabet, "f")));

    auto budget = build_budget(c, "b", s.alphabet);
    CHECK(budget.word_list.size() == 2);

    CHECK_THROWS_AS(parse_word(s.alphabet, "f..g"), Error);
    CHECK_THROWS_AS(parse_word(s.alphabet, "h"), Error);
}

TEST_CASE("run_experiment dispatches by kind") {
    auto c = parse_config_text(kMinimal);
    auto rep = run_experiment(c, "e");
    CHECK(rep.name == "e");
    CHECK(rep.verdict == verify::TheoremReport::Verdict::Pass);
    CHECK_THROWS_AS(run_experiment(c, "ghost"), Error);
}

TEST_CASE("region values parse both shapes") {
    auto c = parse_config_text("[semigroup s]\ngen f = z\n"
                               "[experiment e]\nkind = fundamental_set\nsemigroup = s\n"
                               "region = rect -1 -2 3 4\n");
    auto r = c.experiment("e").region;
    REQUIRE(r.has_value());
    CHECK(r->kind == verify::Region::Kind::Rect);
    CHECK(r->x1 == 3.0);
}
