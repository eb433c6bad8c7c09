#pragma once

// Word algebra for finitely generated semigroups: words over a generator
// alphabet, subsemigroup membership oracles, and the three indices (finite,
// cofinite, Rees) semidecided up to a word-length bound.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "semidyn/errors.hpp"

namespace semidyn::words {

using Letter = int;

struct Alphabet {
    std::vector<Letter> symbols;     // unique, non-empty
    std::vector<std::string> names;  // parallel to symbols
    bool abelian = false;            // free-commutative word semantics

    Alphabet(std::vector<Letter> syms, std::vector<std::string> nms, bool abel = false);

    std::size_t size() const { return symbols.size(); }
    const std::string& name_of(Letter l) const;
    std::optional<Letter> letter_by_name(const std::string& n) const;
};

// [a1, a2, ..., ak] denotes f_{a1} o f_{a2} o ... o f_{ak}, applied
// rightmost-first. In abelian mode the canonical form is multiset-sorted.
struct Word {
    std::vector<Letter> letters;  // length >= 1

    std::size_t length() const { return letters.size(); }
    bool operator==(const Word&) const = default;
};

// Ordering by (length, lexicographic).
bool word_less(const Word& a, const Word& b);

Word canonical(const Alphabet& alpha, Word w);

// Composition-order concatenation: (u o v), canonicalized.
Word concat(const Alphabet& alpha, const Word& u, const Word& v);

// Identity or a word; Identity composes as a neutral element.
struct ExtendedWord {
    std::optional<Word> word;  // nullopt = Identity

    static ExtendedWord identity() { return {}; }
    static ExtendedWord of(Word w) { return {std::move(w)}; }
    bool is_identity() const { return !word.has_value(); }
    std::size_t length() const { return word ? word->length() : 0; }
    bool operator==(const ExtendedWord&) const = default;
};

Word concat(const Alphabet& alpha, const ExtendedWord& u, const Word& v);

std::string to_string(const Alphabet& alpha, const Word& w);
std::string to_string(const Alphabet& alpha, const ExtendedWord& w);

// Decidable membership predicate for a subsemigroup T of S.
// Stateless: contains() answers for any word length, safe to call
// concurrently.
class SubsemigroupOracle {
  public:
    virtual ~SubsemigroupOracle() = default;
    virtual bool contains(const Word& w) const = 0;
    virtual std::string describe(const Alphabet& alpha) const = 0;
};

using OraclePtr = std::shared_ptr<const SubsemigroupOracle>;

// Factories validate the closure property u,v in T => u o v in T
// exhaustively up to closure_bound and throw ClosureError on violation.
OraclePtr make_generated_by(const Alphabet& alpha, std::vector<Word> generators,
                            int closure_bound);
OraclePtr make_length_multiple(const Alphabet& alpha, int n, int closure_bound);
OraclePtr make_prefix_is(const Alphabet& alpha, Letter outermost, int closure_bound);
OraclePtr make_complement_of_finite(const Alphabet& alpha, OraclePtr base,
                                    std::vector<Word> excluded, int closure_bound);

// Exhaustive closure re-check used by the factories and by property tests.
// Returns an offending pair if one exists with |u o v| <= bound.
std::optional<std::pair<Word, Word>> closure_violation(const Alphabet& alpha,
                                                       const SubsemigroupOracle& oracle,
                                                       int bound);

struct IndexVerdict {
    enum class Kind { Exact, AtLeast, UnboundedUpTo };
    Kind kind;
    int value;  // Exact: the index; AtLeast: lower bound; UnboundedUpTo: the bound
    int bound;  // word-length bound B used in the semidecision
    std::vector<ExtendedWord> witnesses;  // Exact only

    bool exact() const { return kind == Kind::Exact; }
};

// All canonical words of length 1..max_len, sorted by (length, lex);
// abelian duplicates merged.
std::vector<Word> enumerate_words(const Alphabet& alpha, int max_len);

enum class TranslateSide { Left, Right };

// { prefix o t : t in T, |prefix o t| <= bound } (or t o prefix for Right).
std::vector<Word> translate(const Alphabet& alpha, const ExtendedWord& prefix,
                            const SubsemigroupOracle& oracle, int bound,
                            TranslateSide side = TranslateSide::Left);

// Smallest witness set {w_i} in S^1 (|w_i| <= bound) with every word of S of
// length <= bound lying in some w_i o T^1 (a witness covers itself). Exhaustive,
// smallest cardinality first, lexicographically-least witness set.
IndexVerdict finite_index(const Alphabet& alpha, const SubsemigroupOracle& oracle,
                          int bound, int max_index);

// Smallest witness set {w_i} in S^1 with: for every word u of S of length
// <= bound there is an i with w_i o u in T.
IndexVerdict cofinite_index(const Alphabet& alpha, const SubsemigroupOracle& oracle,
                            int bound, int max_index);

// |S - T| + 1 when the complement count is stable over the last three
// lengths; UnboundedUpTo otherwise. Exact verdicts carry the complement as
// witnesses.
IndexVerdict rees_index(const Alphabet& alpha, const SubsemigroupOracle& oracle,
                        int bound);

struct ExtensionReport {
    std::vector<Word> complement;           // S - T up to the bound
    std::vector<Word> generating_set_of_t;  // irredundant generators of T up to the bound
    bool stable;                            // no new generators at the last two lengths
};

// Bounded constructive check that T acquires a finite generating set when
// S - T is finite. Requires rees_index Exact at this bound.
ExtensionReport check_finitely_generated_extension(const Alphabet& alpha,
                                                   const SubsemigroupOracle& oracle,
                                                   int bound);

}  // namespace semidyn::words
