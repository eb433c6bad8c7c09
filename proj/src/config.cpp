#include "semidyn/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace semidyn::cfg {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ParseError(line, "expected a number, got '" + v + "'");
    }
}

int parse_int(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        int n = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw ParseError(line, "expected an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ParseError(line, "expected true/false, got '" + v + "'");
}

// Complex constants reuse the formula grammar; the value must not depend on z.
fx::cplx parse_complex(const std::string& v, int line) {
    try {
        auto e = fx::parse_formula(v);
        fx::cplx at0 = e->eval(fx::cplx{0, 0}), at1 = e->eval(fx::cplx{1, 1});
        if (at0 != at1) throw ParseError(line, "'" + v + "' is not a constant");
        return at0;
    } catch (const FormulaError& e) {
        throw ParseError(line, std::string("bad complex constant: ") + e.what());
    }
}

std::string fmt_double(double d) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    // shortest representation that round-trips, for stable re-serialization
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, d);
        if (std::stod(shorter) == d) return shorter;
    }
    return buf;
}

std::string fmt_complex(fx::cplx c) {
    if (c.imag() == 0) return fmt_double(c.real());
    std::string im = fmt_double(std::abs(c.imag())) + "i";
    std::string sign = c.imag() < 0 ? "-" : "+";
    if (c.real() == 0 && c.imag() > 0) return im;
    if (c.real() == 0) return "-" + im;
    return fmt_double(c.real()) + sign + im;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += v[i];
    }
    return out;
}

verify::Region parse_region(const std::string& v, int line) {
    auto toks = split_ws(v);
    verify::Region r;
    if (toks.size() == 4 && toks[0] == "disk") {
        r.kind = verify::Region::Kind::Disk;
        r.center = fx::cplx{parse_double(toks[1], line), parse_double(toks[2], line)};
        r.radius = parse_double(toks[3], line);
        if (!(r.radius > 0)) throw ParseError(line, "disk radius must be positive");
        return r;
    }
    if (toks.size() == 5 && toks[0] == "rect") {
        r.kind = verify::Region::Kind::Rect;
        r.x0 = parse_double(toks[1], line);
        r.y0 = parse_double(toks[2], line);
        r.x1 = parse_double(toks[3], line);
        r.y1 = parse_double(toks[4], line);
        if (!(r.x0 < r.x1) || !(r.y0 < r.y1))
            throw ParseError(line, "rect needs x0 < x1 and y0 < y1");
        return r;
    }
    throw ParseError(line, "region must be 'disk re im radius' or 'rect x0 y0 x1 y1'");
}

std::string region_text(const verify::Region& r) {
    if (r.kind == verify::Region::Kind::Disk)
        return "disk " + fmt_double(r.center.real()) + " " + fmt_double(r.center.imag()) +
               " " + fmt_double(r.radius);
    return "rect " + fmt_double(r.x0) + " " + fmt_double(r.y0) + " " + fmt_double(r.x1) +
           " " + fmt_double(r.y1);
}

template <class Sec>
const Sec& find_named(const std::vector<Sec>& v, const std::string& name,
                      const std::string& kind) {
    for (const auto& s : v)
        if (s.name == name) return s;
    throw Error("no " + kind + " named '" + name + "' in configuration");
}

}  // namespace

const SemigroupSec& Config::semigroup(const std::string& n) const {
    return find_named(semigroups, n, "semigroup");
}
const GridSec& Config::grid(const std::string& n) const { return find_named(grids, n, "grid"); }
const BudgetSec& Config::budget(const std::string& n) const {
    return find_named(budgets, n, "budget");
}
const OracleSec& Config::oracle(const std::string& n) const {
    return find_named(oracles, n, "oracle");
}
const ExperimentSec& Config::experiment(const std::string& n) const {
    return find_named(experiments, n, "experiment");
}
const SuiteSec& Config::suite(const std::string& n) const {
    return find_named(suites, n, "suite");
}

Config parse_config_text(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string raw;
    int line = 0;

    enum class Sec { None, Semigroup, Grid, Budget, Oracle, Experiment, Suite, Output };
    Sec cur = Sec::None;

    auto* sg = static_cast<SemigroupSec*>(nullptr);
    auto* gr = static_cast<GridSec*>(nullptr);
    auto* bu = static_cast<BudgetSec*>(nullptr);
    auto* orc = static_cast<OracleSec*>(nullptr);
    auto* ex = static_cast<ExperimentSec*>(nullptr);
    auto* su = static_cast<SuiteSec*>(nullptr);

    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        std::size_t hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.back() != ']') throw ParseError(line, "unterminated section header");
            auto toks = split_ws(s.substr(1, s.size() - 2));
            if (toks.empty()) throw ParseError(line, "empty section header");
            const std::string& kind = toks[0];
            std::string name = toks.size() > 1 ? toks[1] : "";
            if (kind != "output" && name.empty())
                throw ParseError(line, "section [" + kind + "] needs a name");
            if (toks.size() > 2) throw ParseError(line, "section header has extra tokens");
            if (kind == "semigroup") {
                cfg.semigroups.push_back({name, false, {}, {}});
                sg = &cfg.semigroups.back();
                cur = Sec::Semigroup;
            } else if (kind == "grid") {
                cfg.grids.push_back({name, {}});
                gr = &cfg.grids.back();
                cur = Sec::Grid;
            } else if (kind == "budget") {
                cfg.budgets.push_back({});
                bu = &cfg.budgets.back();
                bu->name = name;
                cur = Sec::Budget;
            } else if (kind == "oracle") {
                cfg.oracles.push_back({});
                orc = &cfg.oracles.back();
                orc->name = name;
                cur = Sec::Oracle;
            } else if (kind == "experiment") {
                cfg.experiments.push_back({});
                ex = &cfg.experiments.back();
                ex->name = name;
                cur = Sec::Experiment;
            } else if (kind == "suite") {
                cfg.suites.push_back({name, {}});
                su = &cfg.suites.back();
                cur = Sec::Suite;
            } else if (kind == "output") {
                cur = Sec::Output;
            } else {
                throw ParseError(line, "unknown section kind '" + kind + "'");
            }
            continue;
        }

        std::size_t eq = s.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty()) throw ParseError(line, "empty key");
        if (val.empty()) throw ParseError(line, "empty value for '" + key + "'");

        switch (cur) {
            case Sec::None:
                throw ParseError(line, "key outside any section");
            case Sec::Semigroup: {
                auto toks = split_ws(key);
                if (toks.size() == 2 && toks[0] == "gen") {
                    sg->gen_names.push_back(toks[1]);
                    sg->formulas.push_back(val);
                } else if (key == "abelian") {
                    sg->abelian = parse_bool(val, line);
                } else {
                    throw ParseError(line, "unknown semigroup key '" + key + "'");
                }
                break;
            }
            case Sec::Grid: {
                if (key == "center") gr->spec.center = parse_complex(val, line);
                else if (key == "width") gr->spec.width = parse_double(val, line);
                else if (key == "height") gr->spec.height = parse_double(val, line);
                else if (key == "cols") gr->spec.cols = parse_int(val, line);
                else if (key == "rows") gr->spec.rows = parse_int(val, line);
                else throw ParseError(line, "unknown grid key '" + key + "'");
                break;
            }
            case Sec::Budget: {
                if (key == "max_word_len") bu->max_word_len = parse_int(val, line);
                else if (key == "max_steps") bu->max_steps = parse_int(val, line);
                else if (key == "escape_radius") bu->escape_radius = parse_double(val, line);
                else throw ParseError(line, "unknown budget key '" + key + "'");
                break;
            }
            case Sec::Oracle: {
                if (key == "semigroup") orc->semigroup = val;
                else if (key == "type") orc->type = val;
                else if (key == "words") orc->words = split_ws(val);
                else if (key == "n") orc->n = parse_int(val, line);
                else if (key == "letter") orc->letter = val;
                else if (key == "base") orc->base = val;
                else if (key == "exclude") orc->exclude = split_ws(val);
                else if (key == "closure_bound") orc->closure_bound = parse_int(val, line);
                else throw ParseError(line, "unknown oracle key '" + key + "'");
                break;
            }
            case Sec::Experiment: {
                if (key == "kind") ex->kind = val;
                else if (key == "semigroup") ex->semigroup = val;
                else if (key == "oracle") ex->oracle = val;
                else if (key == "grid") ex->grid = val;
                else if (key == "budget") ex->budget = val;
                else if (key == "index_kind") ex->index_kind = val;
                else if (key == "index_bound") ex->index_bound = parse_int(val, line);
                else if (key == "max_index") ex->max_index = parse_int(val, line);
                else if (key == "rees_bound") ex->rees_bound = parse_int(val, line);
                else if (key == "region") ex->region = parse_region(val, line);
                else if (key == "samples") ex->samples = parse_int(val, line);
                else if (key == "fundamental") ex->fundamental = parse_bool(val, line);
                else if (key == "samples_per_component")
                    ex->samples_per_component = parse_int(val, line);
                else if (key == "min_jaccard_sets")
                    ex->min_jaccard_sets = parse_double(val, line);
                else if (key == "min_jaccard_boundary")
                    ex->min_jaccard_boundary = parse_double(val, line);
                else if (key == "max_violation_fraction")
                    ex->max_violation_fraction = parse_double(val, line);
                else throw ParseError(line, "unknown experiment key '" + key + "'");
                break;
            }
            case Sec::Suite: {
                if (key == "experiments") su->experiments = split_ws(val);
                else throw ParseError(line, "unknown suite key '" + key + "'");
                break;
            }
            case Sec::Output: {
                if (key == "directory") cfg.output_dir = val;
                else throw ParseError(line, "unknown output key '" + key + "'");
                break;
            }
        }
    }

    // Cross-reference validation, reported without line numbers (the file
    // parsed; the graph is wrong).
    for (const auto& o : cfg.oracles) {
        cfg.semigroup(o.semigroup);
        if (o.type == "complement") cfg.oracle(o.base);
        else if (o.type != "generated_by" && o.type != "length_multiple" &&
                 o.type != "prefix_is")
            throw Error("oracle '" + o.name + "': unknown type '" + o.type + "'");
    }
    for (const auto& e : cfg.experiments) {
        cfg.semigroup(e.semigroup);
        if (!e.grid.empty()) cfg.grid(e.grid);
        if (!e.budget.empty()) cfg.budget(e.budget);
        if (!e.oracle.empty()) cfg.oracle(e.oracle);
    }
    for (const auto& s : cfg.suites)
        for (const auto& e : s.experiments) cfg.experiment(e);
    return cfg;
}

Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open configuration file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string serialize(const Config& cfg) {
    std::ostringstream os;
    for (const auto& s : cfg.semigroups) {
        os << "[semigroup " << s.name << "]\n";
        os << "abelian = " << (s.abelian ? "true" : "false") << "\n";
        for (std::size_t i = 0; i < s.gen_names.size(); ++i)
            os << "gen " << s.gen_names[i] << " = " << s.formulas[i] << "\n";
        os << "\n";
    }
    for (const auto& g : cfg.grids) {
        os << "[grid " << g.name << "]\n";
        os << "center = " << fmt_complex(g.spec.center) << "\n";
        os << "width = " << fmt_double(g.spec.width) << "\n";
        os << "height = " << fmt_double(g.spec.height) << "\n";
        os << "cols = " << g.spec.cols << "\n";
        os << "rows = " << g.spec.rows << "\n\n";
    }
    for (const auto& b : cfg.budgets) {
        os << "[budget " << b.name << "]\n";
        os << "max_word_len = " << b.max_word_len << "\n";
        os << "max_steps = " << b.max_steps << "\n";
        os << "escape_radius = " << fmt_double(b.escape_radius) << "\n\n";
    }
    for (const auto& o : cfg.oracles) {
        os << "[oracle " << o.name << "]\n";
        os << "semigroup = " << o.semigroup << "\n";
        os << "type = " << o.type << "\n";
        if (!o.words.empty()) os << "words = " << join(o.words) << "\n";
        if (o.type == "length_multiple") os << "n = " << o.n << "\n";
        if (!o.letter.empty()) os << "letter = " << o.letter << "\n";
        if (!o.base.empty()) os << "base = " << o.base << "\n";
        if (!o.exclude.empty()) os << "exclude = " << join(o.exclude) << "\n";
        os << "closure_bound = " << o.closure_bound << "\n\n";
    }
    for (const auto& e : cfg.experiments) {
        os << "[experiment " << e.name << "]\n";
        os << "kind = " << e.kind << "\n";
        os << "semigroup = " << e.semigroup << "\n";
        if (!e.oracle.empty()) os << "oracle = " << e.oracle << "\n";
        if (!e.grid.empty()) os << "grid = " << e.grid << "\n";
        if (!e.budget.empty()) os << "budget = " << e.budget << "\n";
        if (!e.index_kind.empty()) os << "index_kind = " << e.index_kind << "\n";
        if (e.kind == "index_equality") {
            os << "index_bound = " << e.index_bound << "\n";
            os << "max_index = " << e.max_index << "\n";
        }
        if (e.kind == "rees_equality") os << "rees_bound = " << e.rees_bound << "\n";
        if (e.region) os << "region = " << region_text(*e.region) << "\n";
        if (e.kind == "fundamental_set") {
            os << "samples = " << e.samples << "\n";
            os << "fundamental = " << (e.fundamental ? "true" : "false") << "\n";
        }
        if (e.kind == "cofinite_stabilizer")
            os << "samples_per_component = " << e.samples_per_component << "\n";
        if (e.min_jaccard_sets)
            os << "min_jaccard_sets = " << fmt_double(*e.min_jaccard_sets) << "\n";
        if (e.min_jaccard_boundary)
            os << "min_jaccard_boundary = " << fmt_double(*e.min_jaccard_boundary) << "\n";
        if (e.max_violation_fraction)
            os << "max_violation_fraction = " << fmt_double(*e.max_violation_fraction) << "\n";
        os << "\n";
    }
    for (const auto& s : cfg.suites) {
        os << "[suite " << s.name << "]\n";
        os << "experiments = " << join(s.experiments) << "\n\n";
    }
    os << "[output]\n";
    os << "directory = " << cfg.output_dir << "\n";
    return os.str();
}

verify::Semigroup build_semigroup(const Config& cfg, const std::string& name) {
    const auto& sec = cfg.semigroup(name);
    if (sec.gen_names.empty()) throw Error("semigroup '" + name + "' declares no generators");
    std::vector<words::Letter> syms;
    for (std::size_t i = 0; i < sec.gen_names.size(); ++i)
        syms.push_back(static_cast<words::Letter>(i));
    verify::Semigroup s{words::Alphabet(syms, sec.gen_names, sec.abelian), {}};
    for (const auto& f : sec.formulas) s.generators.push_back(fx::parse_formula(f));
    return s;
}

words::Word parse_word(const words::Alphabet& alpha, const std::string& dotted) {
    words::Word w;
    std::string cur;
    auto flush = [&](const std::string& tok) {
        auto l = alpha.letter_by_name(tok);
        if (!l) throw Error("unknown generator '" + tok + "' in word '" + dotted + "'");
        w.letters.push_back(*l);
    };
    for (char c : dotted) {
        if (c == '.') {
            if (cur.empty()) throw Error("malformed word '" + dotted + "'");
            flush(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (cur.empty()) throw Error("malformed word '" + dotted + "'");
    flush(cur);
    return canonical(alpha, w);
}

words::OraclePtr build_oracle(const Config& cfg, const std::string& name,
                              const words::Alphabet& alpha) {
    const auto& sec = cfg.oracle(name);
    if (sec.type == "generated_by") {
        std::vector<words::Word> gens;
        for (const auto& w : sec.words) gens.push_back(parse_word(alpha, w));
        if (gens.empty()) throw Error("oracle '" + name + "': generated_by needs words");
        return words::make_generated_by(alpha, std::move(gens), sec.closure_bound);
    }
    if (sec.type == "length_multiple")
        return words::make_length_multiple(alpha, sec.n, sec.closure_bound);
    if (sec.type == "prefix_is") {
        auto l = alpha.letter_by_name(sec.letter);
        if (!l) throw Error("oracle '" + name + "': unknown letter '" + sec.letter + "'");
        return words::make_prefix_is(alpha, *l, sec.closure_bound);
    }
    if (sec.type == "complement") {
        auto base = build_oracle(cfg, sec.base, alpha);
        std::vector<words::Word> excl;
        for (const auto& w : sec.exclude) excl.push_back(parse_word(alpha, w));
        return words::make_complement_of_finite(alpha, std::move(base), std::move(excl),
                                                sec.closure_bound);
    }
    throw Error("oracle '" + name + "': unknown type '" + sec.type + "'");
}

dyn::WordBudget build_budget(const Config& cfg, const std::string& name,
                             const words::Alphabet& alpha) {
    const auto& sec = cfg.budget(name);
    if (sec.max_word_len < 1) throw Error("budget '" + name + "': max_word_len must be >= 1");
    if (sec.max_steps < 1) throw Error("budget '" + name + "': max_steps must be >= 1");
    if (!(sec.escape_radius > 1))
        throw Error("budget '" + name + "': escape_radius must exceed 1");
    return dyn::WordBudget::enumerate(alpha, sec.max_word_len, sec.max_steps,
                                      sec.escape_radius);
}

verify::TheoremReport run_experiment(const Config& cfg, const std::string& name, int threads) {
    const auto& e = cfg.experiment(name);
    auto s = build_semigroup(cfg, e.semigroup);

    verify::Tolerances tol;
    if (e.min_jaccard_sets) tol.min_jaccard_sets = *e.min_jaccard_sets;
    if (e.min_jaccard_boundary) tol.min_jaccard_boundary = *e.min_jaccard_boundary;
    if (e.max_violation_fraction) tol.max_violation_fraction = *e.max_violation_fraction;

    auto need = [&](const std::string& field, const std::string& what) {
        if (field.empty())
            throw Error("experiment '" + name + "': missing " + what + " reference");
    };
    need(e.grid, "grid");
    need(e.budget, "budget");
    auto grid = cfg.grid(e.grid).spec;
    auto budget = build_budget(cfg, e.budget, s.alphabet);

    verify::TheoremReport rep;
    if (e.kind == "monotonicity") {
        need(e.oracle, "oracle");
        auto o = build_oracle(cfg, e.oracle, s.alphabet);
        rep = verify::check_monotonicity(s, *o, grid, budget, tol, threads);
    } else if (e.kind == "index_equality") {
        need(e.oracle, "oracle");
        auto o = build_oracle(cfg, e.oracle, s.alphabet);
        verify::IndexKind k;
        if (e.index_kind == "finite") k = verify::IndexKind::Finite;
        else if (e.index_kind == "cofinite") k = verify::IndexKind::Cofinite;
        else throw Error("experiment '" + name + "': index_kind must be finite or cofinite");
        rep = verify::check_index_equality(s, *o, k, e.index_bound, e.max_index, grid, budget,
                                           tol, threads);
    } else if (e.kind == "rees_equality") {
        need(e.oracle, "oracle");
        auto o = build_oracle(cfg, e.oracle, s.alphabet);
        rep = verify::check_rees_equality(s, *o, e.rees_bound, grid, budget, tol, threads);
    } else if (e.kind == "boundary_identity") {
        rep = verify::check_boundary_identity(s, grid, budget, threads);
    } else if (e.kind == "fundamental_set") {
        if (!e.region) throw Error("experiment '" + name + "': fundamental_set needs a region");
        rep = verify::check_fundamental_set(s, *e.region, grid, budget, e.samples,
                                            e.fundamental, tol, threads);
    } else if (e.kind == "cofinite_stabilizer") {
        rep = verify::check_cofinite_stabilizer(s, grid, budget, threads,
                                                e.samples_per_component);
    } else {
        throw Error("experiment '" + name + "': unknown kind '" + e.kind + "'");
    }
    rep.name = name;
    return rep;
}

}  // namespace semidyn::cfg
