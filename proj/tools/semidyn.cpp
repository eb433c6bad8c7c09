// Command-line front end: render masks, compute subsemigroup indices, run
// experiment suites. Outputs are deterministic files; runtime_ms is the only
// field that may differ between identical runs.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "semidyn/config.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace semidyn;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitResourceCap = 2;
constexpr int kExitInexactIndex = 3;
constexpr int kExitClosure = 4;
constexpr int kExitTheoremFailed = 5;

int default_threads() {
    if (const char* env = std::getenv("SEMIDYN_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

json grid_json(const dyn::GridSpec& g) {
    return json{{"center", {g.center.real(), g.center.imag()}},
                {"width", g.width},
                {"height", g.height},
                {"cols", g.cols},
                {"rows", g.rows}};
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw Error("failed writing " + path);
}

json verdict_json(const words::Alphabet& alpha, const words::IndexVerdict& v) {
    json j;
    switch (v.kind) {
        case words::IndexVerdict::Kind::Exact: j["kind"] = "Exact"; break;
        case words::IndexVerdict::Kind::AtLeast: j["kind"] = "AtLeast"; break;
        case words::IndexVerdict::Kind::UnboundedUpTo: j["kind"] = "UnboundedUpTo"; break;
    }
    j["value"] = v.value;
    j["bound"] = v.bound;
    j["witnesses"] = json::array();
    for (const auto& w : v.witnesses) j["witnesses"].push_back(words::to_string(alpha, w));
    return j;
}

int cmd_render(const std::string& config_path, const std::string& semigroup_name,
               const std::string& grid_name, const std::string& budget_name,
               const std::string& set_name, const std::string& out_path,
               const std::string& cube_path, int threads) {
    auto cfg = cfg::parse_config_file(config_path);
    auto s = cfg::build_semigroup(cfg, semigroup_name);
    auto grid = cfg.grid(grid_name).spec;
    auto budget = cfg::build_budget(cfg, budget_name, s.alphabet);

    auto t0 = std::chrono::steady_clock::now();
    auto esc = dyn::escaping_mask(s.generators, grid, budget, threads);
    const dyn::Mask* mask = &esc.i_mask;
    dyn::FatouJulia fj;
    if (set_name != "I") {
        fj = dyn::fatou_julia_masks(esc.i_mask);
        mask = set_name == "J" ? &fj.j_mask : &fj.f_mask;
    }
    dyn::write_pgm(*mask, out_path);
    if (!cube_path.empty()) esc.cube.write_binary(cube_path);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();

    json side;
    side["set"] = set_name;
    side["pixels_set"] = mask->count();
    side["grid"] = grid_json(grid);
    side["budget"] = json{{"max_word_len", budget.max_word_len},
                          {"words", budget.word_list.size()},
                          {"max_steps", budget.max_steps},
                          {"escape_radius", budget.escape_radius}};
    side["runtime_ms"] = ms;
    write_text(out_path + ".json", side.dump(2) + "\n");
    return kExitOk;
}

int cmd_index(const std::string& config_path, const std::string& semigroup_name,
              const std::string& oracle_name, const std::string& kind, int bound,
              int max_index) {
    auto cfg = cfg::parse_config_file(config_path);
    auto s = cfg::build_semigroup(cfg, semigroup_name);
    auto oracle = cfg::build_oracle(cfg, oracle_name, s.alphabet);

    words::IndexVerdict v{};
    if (kind == "finite") v = words::finite_index(s.alphabet, *oracle, bound, max_index);
    else if (kind == "cofinite") v = words::cofinite_index(s.alphabet, *oracle, bound, max_index);
    else v = words::rees_index(s.alphabet, *oracle, bound);

    std::cout << verdict_json(s.alphabet, v).dump() << "\n";
    return v.exact() ? kExitOk : kExitInexactIndex;
}

int cmd_verify(const std::string& config_path, const std::string& suite_name, bool all,
               std::string out_dir, int threads) {
    auto cfg = cfg::parse_config_file(config_path);
    if (out_dir.empty()) out_dir = cfg.output_dir;
    std::filesystem::create_directories(out_dir);

    std::vector<std::string> names;
    std::string report_stem;
    if (all) {
        for (const auto& e : cfg.experiments) names.push_back(e.name);
        report_stem = "all";
    } else {
        names = cfg.suite(suite_name).experiments;
        report_stem = suite_name;
    }
    if (names.empty()) throw Error("no experiments selected");

    json reports = json::array();
    int passed = 0, failed = 0, indeterminate = 0;
    for (const auto& n : names) {
        auto rep = cfg::run_experiment(cfg, n, threads);
        reports.push_back(rep.to_json());
        switch (rep.verdict) {
            case verify::TheoremReport::Verdict::Pass: ++passed; break;
            case verify::TheoremReport::Verdict::Fail: ++failed; break;
            default: ++indeterminate; break;
        }
        std::cout << n << ": " << verify::verdict_name(rep.verdict) << "\n";
    }
    write_text(out_dir + "/" + report_stem + ".json", reports.dump(2) + "\n");

    int decisive = passed + failed;
    std::cout << "PASS " << passed << "/" << decisive;
    if (indeterminate) std::cout << " (" << indeterminate << " indeterminate)";
    std::cout << "\n";
    return failed == 0 ? kExitOk : kExitTheoremFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic laboratory for finitely generated entire semigroups"};
    app.require_subcommand(1);
    int threads = default_threads();
    app.add_option("--threads", threads, "worker thread cap")->check(CLI::PositiveNumber);

    std::string config_path, semigroup_name, oracle_name, grid_name, budget_name;
    std::string set_name = "I", out_path, cube_path, suite_name, out_dir, kind;
    int bound = 6, max_index = 6;
    bool all = false;

    auto* render = app.add_subcommand("render", "write a set approximation as PGM + sidecar");
    render->add_option("--config", config_path)->required();
    render->add_option("--semigroup", semigroup_name)->required();
    render->add_option("--grid", grid_name)->required();
    render->add_option("--budget", budget_name)->required();
    render->add_option("--set", set_name)->check(CLI::IsMember({"I", "J", "F"}));
    render->add_option("--out", out_path)->required();
    render->add_option("--cube", cube_path, "also dump the per-word verdict cube");

    auto* index = app.add_subcommand("index", "compute a subsemigroup index verdict");
    index->add_option("--config", config_path)->required();
    index->add_option("--semigroup", semigroup_name)->required();
    index->add_option("--oracle", oracle_name)->required();
    index->add_option("--kind", kind)->required()
        ->check(CLI::IsMember({"finite", "cofinite", "rees"}));
    index->add_option("--bound", bound)->check(CLI::PositiveNumber);
    index->add_option("--max-index", max_index)->check(CLI::PositiveNumber);

    auto* verify_cmd = app.add_subcommand("verify", "run experiment suites");
    verify_cmd->add_option("--config", config_path)->required();
    verify_cmd->add_option("--suite", suite_name);
    verify_cmd->add_flag("--all", all);
    verify_cmd->add_option("--out", out_dir);

    CLI11_PARSE(app, argc, argv);

    try {
        if (render->parsed())
            return cmd_render(config_path, semigroup_name, grid_name, budget_name, set_name,
                              out_path, cube_path, threads);
        if (index->parsed())
            return cmd_index(config_path, semigroup_name, oracle_name, kind, bound, max_index);
        if (!all && suite_name.empty())
            throw semidyn::Error("verify needs --suite NAME or --all");
        return cmd_verify(config_path, suite_name, all, out_dir, threads);
    } catch (const semidyn::ResourceCapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResourceCap;
    } catch (const semidyn::ClosureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitClosure;
    } catch (const semidyn::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const semidyn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
}
