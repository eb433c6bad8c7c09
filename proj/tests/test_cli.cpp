#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const std::string kCli = SEMIDYN_CLI_PATH;
const std::string kLab = std::string(SEMIDYN_CONFIG_DIR) + "/lab.cfg";
const std::string kPaper = std::string(SEMIDYN_CONFIG_DIR) + "/paper_examples.cfg";

struct Run {
    int exit_code;
    std::string out;
};

Run run(const std::string& args, const fs::path& dir) {
    fs::path log = dir / "stdout.txt";
    int rc = std::system((kCli + " " + args + " >" + log.string() + " 2>&1").c_str());
    Run r;
    r.exit_code = WEXITSTATUS(rc);
    std::ifstream in(log);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.out = buf.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / fs::path("semidyn_cli_test")) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("index: exact verdicts exit 0 with golden JSON") {
    TempDir d;
    auto r = run("index --config " + kPaper +
                     " --semigroup pair --oracle even_pair --kind finite --bound 6",
                 d.path);
    CHECK(r.exit_code == 0);
    CHECK(r.out == "{\"kind\":\"Exact\",\"value\":3,\"bound\":6,"
                   "\"witnesses\":[\"id\",\"f\",\"g\"]}\n");

    auto rees = run("index --config " + kPaper +
                        " --semigroup pair --oracle all_pair --kind rees --bound 6",
                    d.path);
    CHECK(rees.exit_code == 0);
    CHECK(rees.out.find("\"kind\":\"Exact\",\"value\":1") != std::string::npos);
}

TEST_CASE("index: inexact verdicts exit 3") {
    TempDir d;
    auto r = run("index --config " + kPaper +
                     " --semigroup pair --oracle head_f --kind finite --bound 6",
                 d.path);
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("\"kind\":\"AtLeast\"") != std::string::npos);
}

TEST_CASE("exit codes: parse failure 1, closure rejection 4") {
    TempDir d;
    std::ofstream(d.path / "broken.cfg") << "[grid g]\ncols = banana\n";
    auto r = run("index --config " + (d.path / "broken.cfg").string() +
                     " --semigroup s --oracle o --kind finite",
                 d.path);
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("line 2") != std::string::npos);

    std::ofstream(d.path / "closure.cfg")
        << "[semigroup s]\ngen f = sin(z)\ngen g = cos(z)\n"
        << "[oracle all]\nsemigroup = s\ntype = generated_by\nwords = f g\nclosure_bound = 6\n"
        << "[oracle bad]\nsemigroup = s\ntype = complement\nbase = all\nexclude = f.f\n"
        << "closure_bound = 6\n";
    auto c = run("index --config " + (d.path / "closure.cfg").string() +
                     " --semigroup s --oracle bad --kind rees",
                 d.path);
    CHECK(c.exit_code == 4);
}

TEST_CASE("exit code 2: resource cap on oversized grids") {
    TempDir d;
    std::ofstream(d.path / "huge.cfg")
        << "[semigroup s]\nabelian = true\ngen f = exp(z)\n"
        << "[grid g]\ncenter = 0\nwidth = 1\nheight = 1\ncols = 5000\nrows = 5000\n"
        << "[budget b]\nmax_word_len = 1\nmax_steps = 5\nescape_radius = 1e10\n";
    auto r = run("render --config " + (d.path / "huge.cfg").string() +
                     " --semigroup s --grid g --budget b --set I --out " +
                     (d.path / "x.pgm").string(),
                 d.path);
    CHECK(r.exit_code == 2);
}

TEST_CASE("render: PGM header, sidecar, and empty-J window") {
    TempDir d;
    auto out = (d.path / "i.pgm").string();
    auto r = run("render --config " + kLab +
                     " --semigroup exp1 --grid expwin128 --budget len3 --set I --out " + out,
                 d.path);
    REQUIRE(r.exit_code == 0);
    auto pgm = slurp(out);
    CHECK(pgm.rfind("P5\n128 128\n255\n", 0) == 0);
    CHECK(pgm.size() == 15 + 128 * 128);
    auto side = slurp(out + ".json");
    CHECK(side.find("\"pixels_set\": 16384") != std::string::npos);

    // all-escaping window: the Julia approximation is empty
    auto jout = (d.path / "j.pgm").string();
    REQUIRE(run("render --config " + kLab +
                    " --semigroup exp1 --grid expwin128 --budget len3 --set J --out " + jout,
                d.path)
                .exit_code == 0);
    auto jp = slurp(jout);
    CHECK(jp.find('\xff') == std::string::npos);

    auto f = run("render --config " + kLab +
                     " --semigroup sincos --grid sincoswin --budget len3 --set F --out " +
                     (d.path / "f.pgm").string(),
                 d.path);
    CHECK(f.exit_code == 0);
    CHECK(slurp((d.path / "f.pgm").string() + ".json").find("\"pixels_set\": 0") ==
          std::string::npos);
}

TEST_CASE("render: verdict cube dump has the documented size") {
    TempDir d;
    auto out = (d.path / "i.pgm").string();
    auto cube = (d.path / "cube.bin").string();
    REQUIRE(run("render --config " + kLab +
                    " --semigroup exp1 --grid expwin128 --budget len3 --set I --out " + out +
                    " --cube " + cube,
                d.path)
                .exit_code == 0);
    CHECK(fs::file_size(cube) == 3u * 128 * 128);  // words f, f.f, f.f.f
}

TEST_CASE("verify: suite summary line and exit codes") {
    TempDir d;
    auto r = run("verify --config " + kLab + " --suite boundary --out " + d.path.string(),
                 d.path);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("PASS 3/3") != std::string::npos);
    CHECK(fs::exists(d.path / "boundary.json"));

    auto f = run("verify --config " + kLab + " --suite fundamental --out " + d.path.string(),
                 d.path);
    CHECK(f.exit_code == 0);  // hypothesis-failed is not a theorem failure
    CHECK(f.out.find("fund_zexp_counter: hypothesis_failed") != std::string::npos);

    auto missing = run("verify --config " + kLab + " --suite nope --out " + d.path.string(),
                       d.path);
    CHECK(missing.exit_code == 1);
}

TEST_CASE("environment variable caps threads without changing bytes") {
    TempDir d;
    auto out1 = (d.path / "a.pgm").string();
    auto out2 = (d.path / "b.pgm").string();
    REQUIRE(run("render --config " + kLab +
                    " --semigroup sincos --grid sincoswin --budget len3 --set I --out " + out1,
                d.path)
                .exit_code == 0);
    int rc = std::system(("SEMIDYN_THREADS=8 " + kCli + " render --config " + kLab +
                          " --semigroup sincos --grid sincoswin --budget len3 --set I --out " +
                          out2 + " >/dev/null 2>&1")
                             .c_str());
    REQUIRE(WEXITSTATUS(rc) == 0);
    CHECK(slurp(out1) == slurp(out2));
}
