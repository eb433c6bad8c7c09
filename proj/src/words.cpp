#include "semidyn/words.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>

namespace semidyn::words {

Alphabet::Alphabet(std::vector<Letter> syms, std::vector<std::string> nms, bool abel)
    : symbols(std::move(syms)), names(std::move(nms)), abelian(abel) {
    if (symbols.empty()) throw Error("alphabet must be non-empty");
    if (names.size() != symbols.size()) throw Error("alphabet names/symbols mismatch");
    std::set<Letter> seen(symbols.begin(), symbols.end());
    if (seen.size() != symbols.size()) throw Error("alphabet identifiers must be unique");
}

const std::string& Alphabet::name_of(Letter l) const {
    for (std::size_t i = 0; i < symbols.size(); ++i)
        if (symbols[i] == l) return names[i];
    throw Error("unknown letter " + std::to_string(l));
}

std::optional<Letter> Alphabet::letter_by_name(const std::string& n) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == n) return symbols[i];
    return std::nullopt;
}

bool word_less(const Word& a, const Word& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    return a.letters < b.letters;
}

Word canonical(const Alphabet& alpha, Word w) {
    if (w.letters.empty()) throw Error("word must be non-empty");
    for (Letter l : w.letters)
        if (std::find(alpha.symbols.begin(), alpha.symbols.end(), l) == alpha.symbols.end())
            throw Error("letter " + std::to_string(l) + " not in alphabet");
    if (alpha.abelian) std::sort(w.letters.begin(), w.letters.end());
    return w;
}

Word concat(const Alphabet& alpha, const Word& u, const Word& v) {
    Word r;
    r.letters.reserve(u.length() + v.length());
    r.letters.insert(r.letters.end(), u.letters.begin(), u.letters.end());
    r.letters.insert(r.letters.end(), v.letters.begin(), v.letters.end());
    return canonical(alpha, std::move(r));
}

Word concat(const Alphabet& alpha, const ExtendedWord& u, const Word& v) {
    if (u.is_identity()) return canonical(alpha, v);
    return concat(alpha, *u.word, v);
}

std::string to_string(const Alphabet& alpha, const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        if (i) s += '.';
        s += alpha.name_of(w.letters[i]);
    }
    return s;
}

std::string to_string(const Alphabet& alpha, const ExtendedWord& w) {
    return w.is_identity() ? "id" : to_string(alpha, *w.word);
}

std::vector<Word> enumerate_words(const Alphabet& alpha, int max_len) {
    if (max_len < 1) throw Error("max_len must be >= 1");
    std::vector<Word> out;
    std::vector<Word> prev;  // canonical words of the previous length
    std::set<std::vector<Letter>> seen;
    for (Letter l : alpha.symbols) {
        Word w = canonical(alpha, Word{{l}});
        if (seen.insert(w.letters).second) prev.push_back(w);
    }
    std::sort(prev.begin(), prev.end(), word_less);
    out = prev;
    for (int len = 2; len <= max_len; ++len) {
        std::set<std::vector<Letter>> level;
        for (const Word& w : prev)
            for (Letter l : alpha.symbols)
                level.insert(concat(alpha, w, Word{{l}}).letters);
        prev.clear();
        for (auto& ls : level) prev.push_back(Word{ls});
        std::sort(prev.begin(), prev.end(), word_less);
        out.insert(out.end(), prev.begin(), prev.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Oracles

namespace {

class GeneratedByOracle final : public SubsemigroupOracle {
  public:
    GeneratedByOracle(const Alphabet& alpha, std::vector<Word> gens)
        : alpha_(alpha), gens_(std::move(gens)) {
        for (Word& g : gens_) g = canonical(alpha_, g);
    }

    bool contains(const Word& w) const override {
        Word c = canonical(alpha_, w);
        return alpha_.abelian ? contains_abelian(c) : contains_free(c);
    }

    std::string describe(const Alphabet& alpha) const override {
        std::string s = "generated_by(";
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            if (i) s += ", ";
            s += to_string(alpha, gens_[i]);
        }
        return s + ")";
    }

    const std::vector<Word>& generators() const { return gens_; }

  private:
    // Free mode: segmentation DP over letter positions.
    bool contains_free(const Word& w) const {
        const std::size_t n = w.length();
        std::vector<char> ok(n + 1, 0);
        ok[0] = 1;
        for (std::size_t i = 1; i <= n; ++i)
            for (const Word& g : gens_) {
                const std::size_t m = g.length();
                if (m > i || !ok[i - m]) continue;
                if (std::equal(g.letters.begin(), g.letters.end(),
                               w.letters.begin() + (i - m))) {
                    ok[i] = 1;
                    break;
                }
            }
        return ok[n];
    }

    // Abelian mode: unbounded multiset knapsack over letter-count vectors.
    bool contains_abelian(const Word& w) const {
        std::map<Letter, int> target;
        for (Letter l : w.letters) target[l]++;
        std::vector<std::map<Letter, int>> gvecs;
        for (const Word& g : gens_) {
            std::map<Letter, int> v;
            for (Letter l : g.letters) v[l]++;
            gvecs.push_back(std::move(v));
        }
        // reachable counts, seeded with the empty combination
        std::set<std::vector<int>> reach;
        std::vector<Letter> keys;
        for (auto& [k, _] : target) keys.push_back(k);
        auto vec_of = [&](const std::map<Letter, int>& m) -> std::optional<std::vector<int>> {
            std::vector<int> v(keys.size(), 0);
            int covered = 0;
            for (auto& [k, c] : m) {
                auto it = std::find(keys.begin(), keys.end(), k);
                if (it == keys.end()) return std::nullopt;  // letter absent from target
                v[it - keys.begin()] = c;
                ++covered;
            }
            (void)covered;
            return v;
        };
        auto tv = *vec_of(target);
        std::vector<std::vector<int>> gv;
        for (auto& g : gvecs)
            if (auto v = vec_of(g)) gv.push_back(*v);
        std::vector<std::vector<int>> frontier{std::vector<int>(keys.size(), 0)};
        reach.insert(frontier[0]);
        while (!frontier.empty()) {
            std::vector<std::vector<int>> next;
            for (auto& cur : frontier)
                for (auto& g : gv) {
                    std::vector<int> s(cur.size());
                    bool fits = true;
                    for (std::size_t i = 0; i < s.size(); ++i) {
                        s[i] = cur[i] + g[i];
                        if (s[i] > tv[i]) { fits = false; break; }
                    }
                    if (!fits) continue;
                    if (s == tv) return true;
                    if (reach.insert(s).second) next.push_back(std::move(s));
                }
            frontier = std::move(next);
        }
        return false;
    }

    const Alphabet alpha_;
    std::vector<Word> gens_;
};

class LengthMultipleOracle final : public SubsemigroupOracle {
  public:
    explicit LengthMultipleOracle(int n) : n_(n) {}
    bool contains(const Word& w) const override {
        return w.length() % static_cast<std::size_t>(n_) == 0;
    }
    std::string describe(const Alphabet&) const override {
        return "length_multiple(" + std::to_string(n_) + ")";
    }

  private:
    int n_;
};

class PrefixIsOracle final : public SubsemigroupOracle {
  public:
    PrefixIsOracle(const Alphabet& alpha, Letter l) : alpha_(alpha), letter_(l) {}
    bool contains(const Word& w) const override {
        return canonical(alpha_, w).letters.front() == letter_;
    }
    std::string describe(const Alphabet& alpha) const override {
        return "prefix_is(" + alpha.name_of(letter_) + ")";
    }

  private:
    const Alphabet alpha_;
    Letter letter_;
};

class ComplementOracle final : public SubsemigroupOracle {
  public:
    ComplementOracle(const Alphabet& alpha, OraclePtr base, std::vector<Word> excl)
        : base_(std::move(base)) {
        for (Word& w : excl) excluded_.insert(canonical(alpha, w).letters);
        alpha_ = std::make_shared<Alphabet>(alpha);
    }
    bool contains(const Word& w) const override {
        Word c = canonical(*alpha_, w);
        return base_->contains(c) && !excluded_.count(c.letters);
    }
    std::string describe(const Alphabet& alpha) const override {
        std::string s = base_->describe(alpha) + " minus {";
        bool first = true;
        for (auto& ls : excluded_) {
            if (!first) s += ", ";
            first = false;
            s += to_string(alpha, Word{ls});
        }
        return s + "}";
    }

  private:
    std::shared_ptr<const Alphabet> alpha_;
    OraclePtr base_;
    std::set<std::vector<Letter>> excluded_;
};

void require_closure(const Alphabet& alpha, const OraclePtr& o, int bound) {
    if (auto v = closure_violation(alpha, *o, bound))
        throw ClosureError("oracle " + o->describe(alpha) +
                           " is not closed under concatenation: " +
                           to_string(alpha, v->first) + " o " + to_string(alpha, v->second) +
                           " rejected");
}

std::vector<Word> accepted_words(const Alphabet& alpha, const SubsemigroupOracle& oracle,
                                 int bound) {
    std::vector<Word> out;
    for (const Word& w : enumerate_words(alpha, bound))
        if (oracle.contains(w)) out.push_back(w);
    return out;
}

}  // namespace

std::optional<std::pair<Word, Word>> closure_violation(const Alphabet& alpha,
                                                       const SubsemigroupOracle& oracle,
                                                       int bound) {
    auto members = accepted_words(alpha, oracle, bound);
    for (const Word& u : members)
        for (const Word& v : members) {
            if (u.length() + v.length() > static_cast<std::size_t>(bound)) continue;
            if (!oracle.contains(concat(alpha, u, v))) return std::make_pair(u, v);
        }
    return std::nullopt;
}

OraclePtr make_generated_by(const Alphabet& alpha, std::vector<Word> generators,
                            int closure_bound) {
    if (generators.empty()) throw Error("generated_by oracle needs at least one word");
    auto o = std::make_shared<GeneratedByOracle>(alpha, std::move(generators));
    require_closure(alpha, o, closure_bound);
    return o;
}

OraclePtr make_length_multiple(const Alphabet& alpha, int n, int closure_bound) {
    if (n < 1) throw Error("length_multiple oracle needs n >= 1");
    auto o = std::make_shared<LengthMultipleOracle>(n);
    require_closure(alpha, o, closure_bound);
    return o;
}

OraclePtr make_prefix_is(const Alphabet& alpha, Letter outermost, int closure_bound) {
    alpha.name_of(outermost);  // validates
    auto o = std::make_shared<PrefixIsOracle>(alpha, outermost);
    require_closure(alpha, o, closure_bound);
    return o;
}

OraclePtr make_complement_of_finite(const Alphabet& alpha, OraclePtr base,
                                    std::vector<Word> excluded, int closure_bound) {
    if (!base) throw Error("complement oracle needs a base oracle");
    auto o = std::make_shared<ComplementOracle>(alpha, std::move(base), std::move(excluded));
    require_closure(alpha, o, closure_bound);
    return o;
}

std::vector<Word> translate(const Alphabet& alpha, const ExtendedWord& prefix,
                            const SubsemigroupOracle& oracle, int bound,
                            TranslateSide side) {
    if (bound < static_cast<int>(prefix.length()) + 1)
        throw Error("translate bound must exceed the prefix length");
    std::vector<Word> out;
    for (const Word& t : accepted_words(alpha, oracle, bound - static_cast<int>(prefix.length()))) {
        Word w = prefix.is_identity()
                     ? canonical(alpha, t)
                     : (side == TranslateSide::Left ? concat(alpha, *prefix.word, t)
                                                    : concat(alpha, t, *prefix.word));
        out.push_back(std::move(w));
    }
    std::sort(out.begin(), out.end(), word_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Index search: exact minimum set cover with lexicographically-least witnesses.

namespace {

struct CoverProblem {
    // candidate witnesses in search order (Identity first, then (length, lex))
    std::vector<ExtendedWord> candidates;
    // covers[c] = indices of words covered by candidate c
    std::vector<std::vector<int>> covers;
    int n_words = 0;
};

using BitRow = std::vector<std::uint64_t>;

BitRow make_row(int n) { return BitRow((n + 63) / 64, 0); }
void set_bit(BitRow& r, int i) { r[i / 64] |= std::uint64_t{1} << (i % 64); }
bool all_set(const BitRow& r, int n) {
    for (int i = 0; i < n; ++i)
        if (!(r[i / 64] >> (i % 64) & 1)) return false;
    return true;
}

struct CoverSearch {
    const CoverProblem& p;
    std::vector<BitRow> rows;  // per candidate bitmask of covered words
    std::vector<std::vector<int>> coverers;  // per word, sorted candidate indices

    explicit CoverSearch(const CoverProblem& prob) : p(prob) {
        rows.reserve(p.candidates.size());
        coverers.assign(p.n_words, {});
        for (std::size_t c = 0; c < p.candidates.size(); ++c) {
            BitRow r = make_row(p.n_words);
            for (int w : p.covers[c]) {
                set_bit(r, w);
                coverers[w].push_back(static_cast<int>(c));
            }
            rows.push_back(std::move(r));
        }
    }

    // Minimal cover size <= limit, or nullopt. Branches on the uncovered word
    // with the fewest coverers; fast for both feasible and infeasible inputs.
    std::optional<int> min_cover_size(int limit) const {
        std::vector<char> covered(p.n_words, 0);
        int best = limit + 1;
        min_cover_rec(covered, 0, best);
        if (best <= limit) return best;
        return std::nullopt;
    }

    void min_cover_rec(std::vector<char>& covered, int used, int& best) const {
        if (used >= best) return;
        int pick = -1, fewest = INT32_MAX;
        for (int w = 0; w < p.n_words; ++w) {
            if (covered[w]) continue;
            int k = static_cast<int>(coverers[w].size());
            if (k == 0) return;  // uncoverable
            if (k < fewest) { fewest = k; pick = w; }
        }
        if (pick < 0) { best = used; return; }
        for (int c : coverers[pick]) {
            std::vector<int> newly;
            for (int w : p.covers[c])
                if (!covered[w]) { covered[w] = 1; newly.push_back(w); }
            min_cover_rec(covered, used + 1, best);
            for (int w : newly) covered[w] = 0;
        }
    }

    // Lexicographically-least cover of exactly size k (candidate-index order).
    std::optional<std::vector<int>> lex_least_cover(int k) const {
        std::vector<int> chosen;
        BitRow covered = make_row(p.n_words);
        if (lex_rec(chosen, covered, 0, k)) return chosen;
        return std::nullopt;
    }

    bool lex_rec(std::vector<int>& chosen, BitRow& covered, int from, int k) const {
        if (static_cast<int>(chosen.size()) == k) return all_set(covered, p.n_words);
        // prune: some uncovered word has no coverer at index >= from
        for (int w = 0; w < p.n_words; ++w) {
            if (covered[w / 64] >> (w % 64) & 1) continue;
            if (coverers[w].empty() || coverers[w].back() < from) return false;
        }
        const int remaining = k - static_cast<int>(chosen.size());
        for (int c = from; c < static_cast<int>(p.candidates.size()); ++c) {
            // skip candidates adding nothing
            bool adds = false;
            for (std::size_t i = 0; i < covered.size(); ++i)
                if (rows[c][i] & ~covered[i]) { adds = true; break; }
            if (!adds && remaining > 0 && p.n_words > 0) continue;
            BitRow saved = covered;
            for (std::size_t i = 0; i < covered.size(); ++i) covered[i] |= rows[c][i];
            chosen.push_back(c);
            if (lex_rec(chosen, covered, c + 1, k)) return true;
            chosen.pop_back();
            covered = saved;
        }
        return false;
    }

    // Greedy max coverage with exactly k picks (ties to the lowest index).
    int greedy_coverage(int k) const {
        BitRow covered = make_row(p.n_words);
        int total = 0;
        for (int step = 0; step < k; ++step) {
            int best_c = -1, best_gain = 0;
            for (std::size_t c = 0; c < rows.size(); ++c) {
                int gain = 0;
                for (std::size_t i = 0; i < covered.size(); ++i)
                    gain += std::popcount(rows[c][i] & ~covered[i]);
                if (gain > best_gain) { best_gain = gain; best_c = static_cast<int>(c); }
            }
            if (best_c < 0) break;
            for (std::size_t i = 0; i < covered.size(); ++i) covered[i] |= rows[best_c][i];
            total += best_gain;
        }
        return total;
    }
};

IndexVerdict run_cover_search(const Alphabet& alpha, CoverProblem prob, int bound,
                              int max_index) {
    CoverSearch search(prob);
    auto k = search.min_cover_size(max_index);
    if (k) {
        auto chosen = search.lex_least_cover(*k);
        std::vector<ExtendedWord> witnesses;
        for (int c : *chosen) witnesses.push_back(prob.candidates[c]);
        return {IndexVerdict::Kind::Exact, *k, bound, std::move(witnesses)};
    }
    // No cover within max_index: AtLeast when coverage still improves with a
    // larger witness set, UnboundedUpTo when it has saturated short of full.
    int at_max = search.greedy_coverage(max_index);
    int at_prev = max_index > 1 ? search.greedy_coverage(max_index - 1) : 0;
    if (at_max > at_prev)
        return {IndexVerdict::Kind::AtLeast, max_index + 1, bound, {}};
    return {IndexVerdict::Kind::UnboundedUpTo, bound, bound, {}};
}

std::vector<ExtendedWord> witness_candidates(const std::vector<Word>& s_words) {
    std::vector<ExtendedWord> cands;
    cands.push_back(ExtendedWord::identity());
    for (const Word& w : s_words) cands.push_back(ExtendedWord::of(w));
    return cands;
}

}  // namespace

IndexVerdict finite_index(const Alphabet& alpha, const SubsemigroupOracle& oracle,
                          int bound, int max_index) {
    if (bound < 2) throw Error("finite_index requires bound >= 2");
    if (max_index < 1) throw Error("finite_index requires max_index >= 1");
    auto s_words = enumerate_words(alpha, bound);
    auto t_words = accepted_words(alpha, oracle, bound);
    if (t_words.empty())
        throw EmptyOracleError("oracle accepts no word of length <= " + std::to_string(bound) +
                               "; index undefined");
    std::map<std::vector<Letter>, int> word_index;
    for (std::size_t i = 0; i < s_words.size(); ++i) word_index[s_words[i].letters] = static_cast<int>(i);

    CoverProblem prob;
    prob.candidates = witness_candidates(s_words);
    prob.n_words = static_cast<int>(s_words.size());
    prob.covers.resize(prob.candidates.size());
    for (std::size_t c = 0; c < prob.candidates.size(); ++c) {
        const ExtendedWord& w = prob.candidates[c];
        // w o T^1: the witness covers itself (t = Identity) plus w o t for t in T
        if (!w.is_identity()) prob.covers[c].push_back(word_index.at(w.word->letters));
        for (const Word& t : t_words) {
            if (w.length() + t.length() > static_cast<std::size_t>(bound)) continue;
            prob.covers[c].push_back(word_index.at(concat(alpha, w, t).letters));
        }
        std::sort(prob.covers[c].begin(), prob.covers[c].end());
        prob.covers[c].erase(std::unique(prob.covers[c].begin(), prob.covers[c].end()),
                             prob.covers[c].end());
    }
    return run_cover_search(alpha, std::move(prob), bound, max_index);
}

IndexVerdict cofinite_index(const Alphabet& alpha, const SubsemigroupOracle& oracle,
                            int bound, int max_index) {
    if (bound < 2) throw Error("cofinite_index requires bound >= 2");
    if (max_index < 1) throw Error("cofinite_index requires max_index >= 1");
    auto s_words = enumerate_words(alpha, bound);
    auto t_words = accepted_words(alpha, oracle, bound);
    if (t_words.empty())
        throw EmptyOracleError("oracle accepts no word of length <= " + std::to_string(bound) +
                               "; index undefined");
    CoverProblem prob;
    prob.candidates = witness_candidates(s_words);
    prob.n_words = static_cast<int>(s_words.size());
    prob.covers.resize(prob.candidates.size());
    for (std::size_t c = 0; c < prob.candidates.size(); ++c) {
        const ExtendedWord& w = prob.candidates[c];
        for (std::size_t u = 0; u < s_words.size(); ++u)
            if (oracle.contains(concat(alpha, w, s_words[u])))
                prob.covers[c].push_back(static_cast<int>(u));
    }
    return run_cover_search(alpha, std::move(prob), bound, max_index);
}

IndexVerdict rees_index(const Alphabet& alpha, const SubsemigroupOracle& oracle,
                        int bound) {
    if (bound < 3) throw Error("rees_index requires bound >= 3");
    auto s_words = enumerate_words(alpha, bound);
    std::vector<Word> complement;
    std::array<int, 3> counts{0, 0, 0};  // at lengths bound-2, bound-1, bound
    for (const Word& w : s_words) {
        if (oracle.contains(w)) continue;
        complement.push_back(w);
        for (int d = 0; d < 3; ++d)
            if (w.length() <= static_cast<std::size_t>(bound - 2 + d)) counts[d]++;
    }
    if (counts[0] == counts[1] && counts[1] == counts[2]) {
        std::vector<ExtendedWord> witnesses;
        for (const Word& w : complement) witnesses.push_back(ExtendedWord::of(w));
        return {IndexVerdict::Kind::Exact, counts[2] + 1, bound, std::move(witnesses)};
    }
    return {IndexVerdict::Kind::UnboundedUpTo, bound, bound, {}};
}

ExtensionReport check_finitely_generated_extension(const Alphabet& alpha,
                                                   const SubsemigroupOracle& oracle,
                                                   int bound) {
    auto rees = rees_index(alpha, oracle, bound);
    if (!rees.exact())
        throw Error("Rees index is not Exact at bound " + std::to_string(bound) +
                    "; finitely-generated extension check not applicable");
    ExtensionReport report;
    for (const ExtendedWord& w : rees.witnesses) report.complement.push_back(*w.word);

    auto t_words = accepted_words(alpha, oracle, bound);
    std::set<std::vector<Letter>> reducible;
    for (const Word& a : t_words)
        for (const Word& b : t_words) {
            if (a.length() + b.length() > static_cast<std::size_t>(bound)) continue;
            reducible.insert(concat(alpha, a, b).letters);
        }
    std::size_t last_two_from = bound >= 2 ? static_cast<std::size_t>(bound - 1) : 1;
    report.stable = true;
    for (const Word& t : t_words) {
        if (reducible.count(t.letters)) continue;
        report.generating_set_of_t.push_back(t);
        if (t.length() >= last_two_from) report.stable = false;
    }
    return report;
}

}  // namespace semidyn::words
