#pragma once

// Declarative plain-text configuration: named semigroup/grid/budget/oracle/
// experiment sections, suite grouping, and resolution into runnable objects.
//
// Syntax: INI-style. `[kind name]` opens a section; `key = value` lines;
// `#` starts a comment; blank lines ignored. Formulas and word lists are
// plain values (no quoting). Words are dot-joined generator names (f.g.f);
// lists are whitespace-separated.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semidyn/verification.hpp"

namespace semidyn::cfg {

struct SemigroupSec {
    std::string name;
    bool abelian = false;
    std::vector<std::string> gen_names;  // declaration order
    std::vector<std::string> formulas;
};

struct GridSec {
    std::string name;
    dyn::GridSpec spec;
};

struct BudgetSec {
    std::string name;
    int max_word_len = 1;
    int max_steps = 100;
    double escape_radius = 1e10;
};

struct OracleSec {
    std::string name;
    std::string semigroup;
    std::string type;  // generated_by | length_multiple | prefix_is | complement
    std::vector<std::string> words;    // generated_by
    int n = 0;                         // length_multiple
    std::string letter;                // prefix_is
    std::string base;                  // complement: base oracle name
    std::vector<std::string> exclude;  // complement: excluded words
    int closure_bound = 6;
};

struct ExperimentSec {
    std::string name;
    std::string kind;  // monotonicity | index_equality | rees_equality |
                       // boundary_identity | fundamental_set | cofinite_stabilizer
    std::string semigroup, oracle, grid, budget;
    std::string index_kind;  // index_equality: finite | cofinite
    int index_bound = 6;
    int max_index = 6;
    int rees_bound = 6;
    std::optional<verify::Region> region;  // fundamental_set
    int samples = 500;
    bool fundamental = false;
    int samples_per_component = 64;
    std::optional<double> min_jaccard_sets, min_jaccard_boundary, max_violation_fraction;
};

struct SuiteSec {
    std::string name;
    std::vector<std::string> experiments;
};

struct Config {
    std::vector<SemigroupSec> semigroups;
    std::vector<GridSec> grids;
    std::vector<BudgetSec> budgets;
    std::vector<OracleSec> oracles;
    std::vector<ExperimentSec> experiments;
    std::vector<SuiteSec> suites;
    std::string output_dir = "out";

    const SemigroupSec& semigroup(const std::string& name) const;
    const GridSec& grid(const std::string& name) const;
    const BudgetSec& budget(const std::string& name) const;
    const OracleSec& oracle(const std::string& name) const;
    const ExperimentSec& experiment(const std::string& name) const;
    const SuiteSec& suite(const std::string& name) const;
};

Config parse_config_text(const std::string& text);
Config parse_config_file(const std::string& path);

// Canonical re-serialization; parse(serialize(parse(x))) is the identity on
// semantics (and on bytes after one round).
std::string serialize(const Config& config);

// Resolution into runnable objects.
verify::Semigroup build_semigroup(const Config& config, const std::string& name);
words::OraclePtr build_oracle(const Config& config, const std::string& name,
                              const words::Alphabet& alpha);
dyn::WordBudget build_budget(const Config& config, const std::string& name,
                             const words::Alphabet& alpha);
words::Word parse_word(const words::Alphabet& alpha, const std::string& dotted);

verify::TheoremReport run_experiment(const Config& config, const std::string& name,
                                     int threads = 1);

}  // namespace semidyn::cfg
