#pragma once

// Named, reproducible experiments over word-algebra verdicts and pixel masks:
// each encodes one theorem-level claim and emits pass/fail with metrics and
// explicit truncation disclosure.

#include <string>

#include "json.hpp"
#include "semidyn/dynamics.hpp"
#include "semidyn/expr.hpp"
#include "semidyn/words.hpp"

namespace semidyn::verify {

using json = nlohmann::ordered_json;

struct Semigroup {
    words::Alphabet alphabet;
    std::vector<fx::ExprPtr> generators;  // parallel to alphabet.symbols
};

struct Tolerances {
    double min_jaccard_sets = 0.98;
    double min_jaccard_boundary = 0.95;  // boundaries are thin
    double max_violation_fraction = 0.005;
};

// Rectangle or disk in plane coordinates.
struct Region {
    enum class Kind { Disk, Rect };
    Kind kind = Kind::Disk;
    fx::cplx center{};
    double radius = 0;
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    bool contains(fx::cplx z) const;
    json to_json() const;
};

struct TheoremReport {
    std::string name;
    std::string claim;  // the relation the experiment checks
    enum class Verdict { Pass, Fail, Indeterminate, HypothesisFailed };
    Verdict verdict = Verdict::Indeterminate;
    json metrics;
    json truncation;  // bounds, budgets, grid, iteration params
    std::string config_hash;

    bool passed() const { return verdict == Verdict::Pass; }
    json to_json() const;
};

std::string verdict_name(TheoremReport::Verdict v);
std::string fnv1a_hex(const std::string& data);

enum class IndexKind { Finite, Cofinite };

// F(S) subset F(T), J(S) superset J(T), I(S) subset I(T) for a subsemigroup T:
// zero I violations demanded, F/J within the violation tolerance.
TheoremReport check_monotonicity(const Semigroup& s, const words::SubsemigroupOracle& oracle,
                                 const dyn::GridSpec& grid, const dyn::WordBudget& budget,
                                 const Tolerances& tol = {}, int threads = 1);

// I/J/F equality when T has Exact finite or cofinite index in an abelian S.
// Refuses non-abelian configs and non-Exact index verdicts.
TheoremReport check_index_equality(const Semigroup& s, const words::SubsemigroupOracle& oracle,
                                   IndexKind kind, int index_bound, int max_index,
                                   const dyn::GridSpec& grid, const dyn::WordBudget& budget,
                                   const Tolerances& tol = {}, int threads = 1);

// Same equality under Exact Rees index; abelian not required.
TheoremReport check_rees_equality(const Semigroup& s, const words::SubsemigroupOracle& oracle,
                                  int rees_bound, const dyn::GridSpec& grid,
                                  const dyn::WordBudget& budget, const Tolerances& tol = {},
                                  int threads = 1);

// The boundary of the escaping mask equals the Julia approximation, computed
// two independent ways; F/J partition the non-frame pixels. Exact.
TheoremReport check_boundary_identity(const Semigroup& s, const dyn::GridSpec& grid,
                                      const dyn::WordBudget& budget, int threads = 1);

// Phase 1 (hypothesis): w(u) outside U for every budget word w and sampled
// u in U; a violation yields HypothesisFailed, never a theorem failure.
// Phase 2 (conclusion): U's pixels lie in the Fatou approximation; when
// `fundamental` is declared by the experiment author, also in the escaping
// approximation. Tolerance applies to U's pixel count.
TheoremReport check_fundamental_set(const Semigroup& s, const Region& u,
                                    const dyn::GridSpec& grid, const dyn::WordBudget& budget,
                                    int sample_count, bool fundamental,
                                    const Tolerances& tol = {}, int threads = 1);

// Searches each component's forward orbit for a component whose probed
// stabilizer satisfies the cofinite condition within budget. Indeterminate
// whenever a component image is Split/OffGrid.
TheoremReport check_cofinite_stabilizer(const Semigroup& s, const dyn::GridSpec& grid,
                                        const dyn::WordBudget& budget, int threads = 1,
                                        int samples_per_component = 64);

}  // namespace semidyn::verify
