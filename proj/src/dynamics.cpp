#include "semidyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <thread>

namespace semidyn::dyn {

WordBudget WordBudget::enumerate(const words::Alphabet& alpha, int max_word_len,
                                 int max_steps, double escape_radius) {
    WordBudget b;
    b.max_word_len = max_word_len;
    b.word_list = words::enumerate_words(alpha, max_word_len);
    b.max_steps = max_steps;
    b.escape_radius = escape_radius;
    return b;
}

Mask VerdictCube::intersect(const std::vector<std::size_t>& word_indices) const {
    Mask m(grid, Mask::Tag::IApprox);
    if (word_indices.empty()) return m;
    std::fill(m.bits.begin(), m.bits.end(), 1);
    for (std::size_t w : word_indices)
        for (std::size_t k = 0; k < m.bits.size(); ++k) m.bits[k] &= escaped[w][k];
    return m;
}

Mask VerdictCube::intersect_all() const {
    std::vector<std::size_t> all(word_list.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return intersect(all);
}

void VerdictCube::write_binary(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    for (const auto& plane : escaped)
        out.write(reinterpret_cast<const char*>(plane.data()),
                  static_cast<std::streamsize>(plane.size()));
    if (!out) throw Error("failed writing " + path);
}

EscapeResult escaping_mask(const std::vector<fx::ExprPtr>& generators, const GridSpec& grid,
                           const WordBudget& budget, int threads) {
    grid.validate();
    if (budget.word_list.empty()) throw Error("escaping_mask: empty word budget");
    const std::size_t n_words = budget.word_list.size();
    const std::size_t n_px = static_cast<std::size_t>(grid.pixel_count());

    std::vector<fx::ExprPtr> maps;
    maps.reserve(n_words);
    for (const auto& w : budget.word_list) maps.push_back(fx::word_map(w, generators));

    EscapeResult res;
    res.cube.grid = grid;
    res.cube.word_list = budget.word_list;
    res.cube.max_steps = budget.max_steps;
    res.cube.escape_radius = budget.escape_radius;
    res.cube.escaped.assign(n_words, std::vector<std::uint8_t>(n_px, 0));

    // Pixels are independent; workers own disjoint row ranges, so the result
    // is identical for any worker count.
    threads = std::max(1, threads);
    threads = std::min(threads, grid.rows);
    auto work = [&](int row_begin, int row_end) {
        for (int i = row_begin; i < row_end; ++i)
            for (int j = 0; j < grid.cols; ++j) {
                const cplx z0 = grid.point_at(i, j);
                const std::size_t px = static_cast<std::size_t>(i) * grid.cols + j;
                for (std::size_t w = 0; w < n_words; ++w) {
                    auto v = fx::iterate(*maps[w], z0, budget.steps_for(w),
                                         budget.escape_radius);
                    res.cube.escaped[w][px] = v.escaped() ? 1 : 0;
                }
            }
    };
    if (threads == 1) {
        work(0, grid.rows);
    } else {
        std::vector<std::thread> pool;
        int per = (grid.rows + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            int lo = t * per, hi = std::min(grid.rows, lo + per);
            if (lo >= hi) break;
            pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    res.i_mask = res.cube.intersect_all();
    return res;
}

namespace {

// neighborhood scan including the pixel itself
void scan8(const Mask& m, int i, int j, bool& any_in, bool& any_out) {
    any_in = any_out = false;
    for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
            if (m.at(i + di, j + dj)) any_in = true;
            else any_out = true;
        }
}

}  // namespace

FatouJulia fatou_julia_masks(const Mask& i_mask) {
    if (i_mask.tag != Mask::Tag::IApprox)
        throw Error("fatou_julia_masks expects an I-approximation mask");
    const GridSpec& g = i_mask.grid;
    FatouJulia fj{Mask(g, Mask::Tag::FApprox), Mask(g, Mask::Tag::JApprox)};
    for (int i = 1; i + 1 < g.rows; ++i)
        for (int j = 1; j + 1 < g.cols; ++j) {
            bool any_in, any_out;
            scan8(i_mask, i, j, any_in, any_out);
            if (any_in && any_out) fj.j_mask.at(i, j) = 1;
            else fj.f_mask.at(i, j) = 1;
        }
    return fj;
}

Mask boundary_of_complement(const Mask& i_mask) {
    const GridSpec& g = i_mask.grid;
    Mask inverted(g, Mask::Tag::IApprox);
    for (std::size_t k = 0; k < i_mask.bits.size(); ++k)
        inverted.bits[k] = i_mask.bits[k] ? 0 : 1;
    Mask j(g, Mask::Tag::JApprox);
    for (int i = 1; i + 1 < g.rows; ++i)
        for (int j2 = 1; j2 + 1 < g.cols; ++j2) {
            bool any_in, any_out;
            scan8(inverted, i, j2, any_in, any_out);
            if (any_in && any_out) j.at(i, j2) = 1;
        }
    return j;
}

MaskComparison mask_compare(const Mask& a, const Mask& b) {
    if (a.grid != b.grid) throw GridMismatchError("mask_compare: grid mismatch");
    std::int64_t both = 0, only_a = 0, only_b = 0;
    for (std::size_t k = 0; k < a.bits.size(); ++k) {
        if (a.bits[k] && b.bits[k]) ++both;
        else if (a.bits[k]) ++only_a;
        else if (b.bits[k]) ++only_b;
    }
    std::int64_t uni = both + only_a + only_b;
    return {uni == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(uni),
            only_a, only_b};
}

std::int64_t mask_subset_violations(const Mask& a, const Mask& b) {
    if (a.grid != b.grid) throw GridMismatchError("mask_subset_violations: grid mismatch");
    std::int64_t n = 0;
    for (std::size_t k = 0; k < a.bits.size(); ++k)
        if (a.bits[k] && !b.bits[k]) ++n;
    return n;
}

ComponentMap label_components(const Mask& f_mask) {
    if (f_mask.tag != Mask::Tag::FApprox)
        throw Error("label_components expects an F-approximation mask");
    const GridSpec& g = f_mask.grid;
    ComponentMap cm;
    cm.grid = g;
    cm.labels.assign(f_mask.bits.size(), 0);
    int next = 0;
    for (int i = 0; i < g.rows; ++i)
        for (int j = 0; j < g.cols; ++j) {
            std::size_t k = static_cast<std::size_t>(i) * g.cols + j;
            if (!f_mask.bits[k] || cm.labels[k]) continue;
            ++next;
            std::queue<std::pair<int, int>> q;
            q.push({i, j});
            cm.labels[k] = next;
            while (!q.empty()) {
                auto [ci, cj] = q.front();
                q.pop();
                const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
                for (int d = 0; d < 4; ++d) {
                    int ni = ci + di[d], nj = cj + dj[d];
                    if (ni < 0 || nj < 0 || ni >= g.rows || nj >= g.cols) continue;
                    std::size_t nk = static_cast<std::size_t>(ni) * g.cols + nj;
                    if (!f_mask.bits[nk] || cm.labels[nk]) continue;
                    cm.labels[nk] = next;
                    q.push({ni, nj});
                }
            }
        }
    cm.n_components = next;
    return cm;
}

ComponentImage component_image(int label, const fx::Expr& map, const ComponentMap& components,
                               int samples_per_component) {
    if (samples_per_component < 16)
        throw Error("component_image: samples_per_component must be >= 16");
    if (label < 1 || label > components.n_components)
        throw Error("component_image: unknown label " + std::to_string(label));
    std::vector<std::size_t> pixels;
    for (std::size_t k = 0; k < components.labels.size(); ++k)
        if (components.labels[k] == label) pixels.push_back(k);

    // deterministic evenly spaced sample of the component's pixels
    std::size_t stride = std::max<std::size_t>(1, pixels.size() / samples_per_component);
    ComponentImage out{ComponentImage::Kind::Split};
    std::map<int, int> votes;
    for (std::size_t k = 0; k < pixels.size() && out.samples < samples_per_component;
         k += stride) {
        std::size_t px = pixels[k];
        int i = static_cast<int>(px) / components.grid.cols;
        int j = static_cast<int>(px) % components.grid.cols;
        cplx image = map.eval(components.grid.point_at(i, j));
        ++out.samples;
        if (!std::isfinite(image.real()) || !std::isfinite(image.imag())) {
            ++out.non_finite;
            continue;
        }
        int ri, rj;
        if (!components.grid.pixel_of(image, ri, rj)) {
            ++out.off_grid;
            continue;
        }
        votes[components.at(ri, rj)]++;
    }
    const int finite = out.samples - out.non_finite;
    if (out.samples > 0 && out.non_finite * 10 >= out.samples * 9) {
        out.kind = ComponentImage::Kind::Escaped;
        return out;
    }
    int best_label = 0, best_votes = -1;
    for (auto& [l, v] : votes)
        if (l != 0 && v > best_votes) { best_votes = v; best_label = l; }
    if (best_label != 0 && finite > 0 && best_votes * 10 >= finite * 9) {
        out.kind = ComponentImage::Kind::Target;
        out.target_label = best_label;
        out.in_target = best_votes;
        return out;
    }
    if (finite > 0 && out.off_grid * 2 >= finite) {
        out.kind = ComponentImage::Kind::OffGrid;
        return out;
    }
    out.kind = ComponentImage::Kind::Split;
    return out;
}

std::vector<StabilizerEntry> stabilizer_probe(const words::Alphabet& alpha,
                                              const ComponentMap& components,
                                              const std::vector<fx::ExprPtr>& generators,
                                              const WordBudget& budget,
                                              int samples_per_component) {
    if (components.n_components == 0) throw Error("stabilizer_probe: empty component map");
    std::vector<fx::ExprPtr> maps;
    for (const auto& w : budget.word_list) maps.push_back(fx::word_map(w, generators));

    std::map<std::vector<words::Letter>, std::size_t> index_of;
    for (std::size_t i = 0; i < budget.word_list.size(); ++i)
        index_of[budget.word_list[i].letters] = i;

    std::vector<StabilizerEntry> out;
    for (int label = 1; label <= components.n_components; ++label) {
        StabilizerEntry e{label, {}, {}};
        for (std::size_t w = 0; w < maps.size(); ++w) {
            auto img = component_image(label, *maps[w], components, samples_per_component);
            if (img.kind == ComponentImage::Kind::Target && img.target_label == label)
                e.stabilizing_words.push_back(w);
        }
        // Stabilizers are subsemigroups, so the recorded words should be
        // closed under concatenation whenever the concatenation is in budget.
        std::set<std::size_t> rec(e.stabilizing_words.begin(), e.stabilizing_words.end());
        for (std::size_t u : e.stabilizing_words)
            for (std::size_t v : e.stabilizing_words) {
                auto uv = words::concat(alpha, budget.word_list[u], budget.word_list[v]);
                auto it = index_of.find(uv.letters);
                if (it != index_of.end() && !rec.count(it->second))
                    e.closure_violations.push_back({u, v});
            }
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace semidyn::dyn
