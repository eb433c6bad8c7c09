#pragma once

// Pixel-grid classification for a finitely generated entire semigroup:
// escaping/bounded masks intersected over a word budget, Fatou/Julia
// approximations by interior/exterior/boundary morphology, component
// labeling, and forward component mapping.

#include <vector>

#include "semidyn/expr.hpp"
#include "semidyn/grid.hpp"
#include "semidyn/words.hpp"

namespace semidyn::dyn {

// Truncation of the "for every f in S" quantifier: the word list enumerates S
// up to max_word_len. Each word is iterated to (approximately) the same
// generator-application depth: a word of length k runs max(1, N/k) steps.
struct WordBudget {
    int max_word_len = 1;
    std::vector<words::Word> word_list;
    int max_steps = 100;
    double escape_radius = 1e10;
    std::vector<int> steps_per_word;  // empty = derive from max_steps

    static WordBudget enumerate(const words::Alphabet& alpha, int max_word_len,
                                int max_steps, double escape_radius);

    int steps_for(std::size_t word_idx) const {
        if (!steps_per_word.empty()) return steps_per_word[word_idx];
        int len = static_cast<int>(word_list[word_idx].length());
        return std::max(1, max_steps / len);
    }
};

// Per-word escape verdicts: escaped[w] is a rows*cols bitplane.
struct VerdictCube {
    GridSpec grid;
    std::vector<words::Word> word_list;
    int max_steps = 0;
    double escape_radius = 0;
    std::vector<std::vector<std::uint8_t>> escaped;

    // AND of the selected bitplanes, as an I-mask.
    Mask intersect(const std::vector<std::size_t>& word_indices) const;
    Mask intersect_all() const;

    // Documented binary layout: for each word in order, rows*cols bytes
    // (row-major, 1 = escaped). The JSON sidecar carries {grid, words, N, R}.
    void write_binary(const std::string& path) const;
};

struct EscapeResult {
    Mask i_mask;  // pixel escapes under EVERY budget word
    VerdictCube cube;
};

EscapeResult escaping_mask(const std::vector<fx::ExprPtr>& generators, const GridSpec& grid,
                           const WordBudget& budget, int threads = 1);

struct FatouJulia {
    Mask f_mask;  // interior of I union interior of its complement (8-neighborhood)
    Mask j_mask;  // pixels whose 8-neighborhood meets both I and its complement
    // Frame pixels (outermost ring) belong to neither.
};

FatouJulia fatou_julia_masks(const Mask& i_mask);

// Boundary computed from the complement side; equals j_mask by symmetry and
// serves as the independent cross-check.
Mask boundary_of_complement(const Mask& i_mask);

struct MaskComparison {
    double jaccard;  // |a&b| / |a|b|; 1.0 when both empty
    std::int64_t a_minus_b;
    std::int64_t b_minus_a;
};

MaskComparison mask_compare(const Mask& a, const Mask& b);
std::int64_t mask_subset_violations(const Mask& a, const Mask& b);  // |a & !b|

struct ComponentMap {
    GridSpec grid;
    std::vector<std::int32_t> labels;  // 0 = not in mask
    int n_components = 0;

    std::int32_t at(int row, int col) const {
        return labels[static_cast<std::size_t>(row) * grid.cols + col];
    }
};

// 4-connectivity flood fill; labels ordered by first row-major pixel.
ComponentMap label_components(const Mask& f_mask);

struct ComponentImage {
    enum class Kind { Target, Escaped, Split, OffGrid };
    Kind kind;
    int target_label = 0;  // Target only
    int samples = 0, in_target = 0, off_grid = 0, non_finite = 0;
};

// Maps up to samples_per_component pixels of component `label` forward and
// reports the Fatou component containing the image (>= 90% plurality), or
// Escaped / Split / OffGrid.
ComponentImage component_image(int label, const fx::Expr& map, const ComponentMap& components,
                               int samples_per_component);

struct StabilizerEntry {
    int label;
    std::vector<std::size_t> stabilizing_words;  // indices into the budget word list
    std::vector<std::pair<std::size_t, std::size_t>> closure_violations;
};

// For each component U and each budget word w, records whether the image
// component U_w equals U; reports closure violations u,v recorded but
// u o v (within budget) not recorded.
std::vector<StabilizerEntry> stabilizer_probe(const words::Alphabet& alpha,
                                              const ComponentMap& components,
                                              const std::vector<fx::ExprPtr>& generators,
                                              const WordBudget& budget,
                                              int samples_per_component = 64);

}  // namespace semidyn::dyn
