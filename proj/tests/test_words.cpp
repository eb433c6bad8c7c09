#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "semidyn/words.hpp"

using namespace semidyn;
using namespace semidyn::words;

namespace {

Alphabet fg() { return Alphabet({0, 1}, {"f", "g"}, false); }
Alphabet fg_ab() { return Alphabet({0, 1}, {"f", "g"}, true); }
Alphabet cyc() { return Alphabet({0}, {"f"}, true); }

Word w(std::initializer_list<Letter> ls) { return Word{std::vector<Letter>(ls)}; }

OraclePtr even_oracle(const Alphabet& a) {
    return make_generated_by(a, {w({0, 0}), w({0, 1}), w({1, 0}), w({1, 1})}, 6);
}

}  // namespace

TEST_CASE("alphabet validation") {
    CHECK_THROWS_AS(Alphabet({}, {}, false), Error);
    CHECK_THROWS_AS(Alphabet({0, 0}, {"f", "g"}, false), Error);
    CHECK_THROWS_AS(Alphabet({0, 1}, {"f"}, false), Error);
    auto a = fg();
    CHECK(a.name_of(1) == "g");
    CHECK(a.letter_by_name("f") == 0);
    CHECK_FALSE(a.letter_by_name("h").has_value());
}

TEST_CASE("word ordering and canonical forms") {
    CHECK(word_less(w({1}), w({0, 0})));   // shorter first
    CHECK(word_less(w({0, 1}), w({1, 0})));  // then lexicographic
    CHECK_FALSE(word_less(w({0, 1}), w({0, 1})));

    auto a = fg_ab();
    CHECK(canonical(a, w({1, 0, 1})) == w({0, 1, 1}));
    CHECK(canonical(fg(), w({1, 0, 1})) == w({1, 0, 1}));  // free: untouched
}

TEST_CASE("concat follows composition order and canonicalizes") {
    auto a = fg();
    CHECK(concat(a, w({0}), w({1, 1})) == w({0, 1, 1}));
    CHECK(concat(a, ExtendedWord::identity(), w({1})) == w({1}));
    auto ab = fg_ab();
    CHECK(concat(ab, w({1}), w({0})) == w({0, 1}));
    CHECK(to_string(a, w({0, 1})) == "f.g");
    CHECK(to_string(a, ExtendedWord::identity()) == "id");
}

TEST_CASE("word enumeration is sorted and abelian-merged") {
    auto free_words = enumerate_words(fg(), 3);
    CHECK(free_words.size() == 2 + 4 + 8);
    CHECK(std::is_sorted(free_words.begin(), free_words.end(), word_less));
    auto ab_words = enumerate_words(fg_ab(), 3);
    CHECK(ab_words.size() == 2 + 3 + 4);  // multisets of sizes 1..3
}

TEST_CASE("generated_by membership, free segmentation") {
    auto a = fg();
    auto t = even_oracle(a);
    CHECK(t->contains(w({0, 1})));
    CHECK(t->contains(w({1, 1, 0, 0})));
    CHECK_FALSE(t->contains(w({0})));
    CHECK_FALSE(t->contains(w({0, 1, 0})));

    // mixed-length generators: {f, g.g} accepts g-blocks of even length only
    auto t2 = make_generated_by(a, {w({0}), w({1, 1})}, 6);
    CHECK(t2->contains(w({0, 1, 1, 0})));
    CHECK_FALSE(t2->contains(w({0, 1, 0})));
}

TEST_CASE("generated_by membership, abelian knapsack") {
    auto a = fg_ab();
    // {f.f, f.g}: reachable letter-count vectors are sums of (2,0) and (1,1)
    auto t = make_generated_by(a, {w({0, 0}), w({0, 1})}, 6);
    CHECK(t->contains(w({0, 0, 0, 1})));       // (3,1) = (2,0)+(1,1)
    CHECK(t->contains(w({0, 0, 1, 1})));       // (2,2) = (1,1)+(1,1)
    CHECK_FALSE(t->contains(w({1, 1})));       // (0,2) unreachable
    CHECK_FALSE(t->contains(w({0, 1, 1, 1}))); // (1,3) unreachable
}

TEST_CASE("length_multiple and prefix_is oracles") {
    auto a = fg();
    auto lm = make_length_multiple(a, 2, 6);
    CHECK(lm->contains(w({0, 1})));
    CHECK_FALSE(lm->contains(w({0, 1, 0})));
    CHECK_THROWS_AS(make_length_multiple(a, 0, 6), Error);

    auto pf = make_prefix_is(a, 0, 6);
    CHECK(pf->contains(w({0, 1, 1})));
    CHECK_FALSE(pf->contains(w({1, 0})));
}

TEST_CASE("complement oracle and closure rejection") {
    auto a = fg();
    auto all = make_generated_by(a, {w({0}), w({1})}, 6);
    auto t = make_complement_of_finite(a, all, {w({0}), w({1})}, 6);
    CHECK_FALSE(t->contains(w({0})));
    CHECK(t->contains(w({0, 1})));

    // removing f.f alone leaves f, f in T with f o f outside: not a subsemigroup
    CHECK_THROWS_AS(make_complement_of_finite(a, all, {w({0, 0})}, 6), ClosureError);
}

TEST_CASE("closure_violation finds the offending pair") {
    auto a = fg();
    struct Bad : SubsemigroupOracle {
        bool contains(const Word& x) const override { return x.length() <= 2; }
        std::string describe(const Alphabet&) const override { return "bad"; }
    } bad;
    auto v = closure_violation(a, bad, 6);
    REQUIRE(v.has_value());
    CHECK(bad.contains(v->first));
    CHECK(bad.contains(v->second));
    CHECK_FALSE(bad.contains(concat(a, v->first, v->second)));

    auto good = even_oracle(a);
    CHECK_FALSE(closure_violation(a, *good, 6).has_value());
}

TEST_CASE("translate golden") {
    auto a = fg();
    auto t = even_oracle(a);
    auto tr = translate(a, ExtendedWord::of(w({1})), *t, 3);
    std::vector<Word> expect = {w({1, 0, 0}), w({1, 0, 1}), w({1, 1, 0}), w({1, 1, 1})};
    CHECK(tr == expect);
}

TEST_CASE("finite and cofinite index: even-word subsemigroup") {
    auto a = fg();
    auto t = even_oracle(a);
    auto fi = finite_index(a, *t, 6, 6);
    REQUIRE(fi.exact());
    CHECK(fi.value == 3);
    REQUIRE(fi.witnesses.size() == 3);
    CHECK(fi.witnesses[0].is_identity());
    CHECK(fi.witnesses[1] == ExtendedWord::of(w({0})));
    CHECK(fi.witnesses[2] == ExtendedWord::of(w({1})));

    auto ci = cofinite_index(a, *t, 6, 6);
    REQUIRE(ci.exact());
    CHECK(ci.value == 2);
    CHECK(ci.witnesses[0].is_identity());
    CHECK(ci.witnesses[1] == ExtendedWord::of(w({0})));
}

TEST_CASE("finite and cofinite index: head-letter subsemigroup") {
    auto a = fg();
    auto t = make_prefix_is(a, 0, 6);
    auto fi = finite_index(a, *t, 6, 6);
    CHECK(fi.kind == IndexVerdict::Kind::AtLeast);
    CHECK(fi.value == 7);

    auto ci = cofinite_index(a, *t, 6, 6);
    REQUIRE(ci.exact());
    CHECK(ci.value == 1);
    CHECK(ci.witnesses[0] == ExtendedWord::of(w({0})));
}

TEST_CASE("cyclic power family indices") {
    auto a = cyc();
    for (int n = 2; n <= 5; ++n) {
        auto t = make_length_multiple(a, n, 12);
        auto fi = finite_index(a, *t, 12, 8);
        REQUIRE(fi.exact());
        CHECK(fi.value == n);
        auto ci = cofinite_index(a, *t, 12, 8);
        REQUIRE(ci.exact());
        CHECK(ci.value == n);
    }
}

TEST_CASE("index verdicts are stable across bounds") {
    auto a = fg();
    auto t = even_oracle(a);
    for (int bound : {4, 6, 8}) {
        auto fi = finite_index(a, *t, bound, 6);
        REQUIRE(fi.exact());
        CHECK(fi.value == 3);
        auto ci = cofinite_index(a, *t, bound, 6);
        REQUIRE(ci.exact());
        CHECK(ci.value == 2);
    }
}

TEST_CASE("Rees index") {
    auto a = fg();
    auto all = make_generated_by(a, {w({0}), w({1})}, 6);
    auto t = make_complement_of_finite(a, all, {w({0}), w({1})}, 6);
    auto r = rees_index(a, *t, 6);
    REQUIRE(r.exact());
    CHECK(r.value == 3);
    REQUIRE(r.witnesses.size() == 2);
    CHECK(r.witnesses[0] == ExtendedWord::of(w({0})));
    CHECK(r.witnesses[1] == ExtendedWord::of(w({1})));

    // T = S: complement empty, index 1
    auto r1 = rees_index(a, *all, 6);
    REQUIRE(r1.exact());
    CHECK(r1.value == 1);
    CHECK(r1.witnesses.empty());

    // infinite complement: even words have unbounded complement
    auto even = even_oracle(a);
    auto r2 = rees_index(a, *even, 6);
    CHECK(r2.kind == IndexVerdict::Kind::UnboundedUpTo);
}

TEST_CASE("finitely generated extension report") {
    auto a = fg();
    auto all = make_generated_by(a, {w({0}), w({1})}, 6);
    auto t = make_complement_of_finite(a, all, {w({0}), w({1})}, 6);
    auto rep = check_finitely_generated_extension(a, *t, 6);
    CHECK(rep.stable);
    CHECK(rep.complement.size() == 2);
    // length-2 and length-3 words generate everything of length >= 2
    CHECK(rep.generating_set_of_t.size() == 4 + 8);
    for (const auto& g : rep.generating_set_of_t) CHECK(g.length() <= 3);
}

TEST_CASE("empty oracle is rejected") {
    auto a = fg();
    struct Empty : SubsemigroupOracle {
        bool contains(const Word&) const override { return false; }
        std::string describe(const Alphabet&) const override { return "empty"; }
    } empty;
    CHECK_THROWS_AS(finite_index(a, empty, 6, 6), EmptyOracleError);
    CHECK_THROWS_AS(cofinite_index(a, empty, 6, 6), EmptyOracleError);
}
