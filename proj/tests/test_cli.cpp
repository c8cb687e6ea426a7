#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Run the CLI with shell redirection; returns exit code and captured streams.
RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() / "darboux_cli_test";
    fs::create_directories(dir);
    const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
    ++counter;

    const std::string cmd = std::string(DARBOUX_CLI_PATH) + " " + args + " > " + out.string() +
                            " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string fixture(const std::string& name) {
    return std::string(DARBOUX_FIXTURE_DIR) + "/" + name;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

/// Column values of a CSV body by header name.
std::vector<double> csv_column(const std::string& text, const std::string& name) {
    const auto lines = split_lines(text);
    REQUIRE(!lines.empty());
    std::vector<std::string> header;
    {
        std::stringstream ss(lines[0]);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    std::size_t col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) col = i;
    }
    REQUIRE(col < header.size());
    std::vector<double> values;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::stringstream ss(lines[i]);
        std::string cell;
        for (std::size_t k = 0; k <= col; ++k) std::getline(ss, cell, ',');
        values.push_back(std::strtod(cell.c_str(), nullptr));
    }
    return values;
}

}  // namespace

TEST_CASE("frames: geodesic helix has a vanishing k_g column") {
    const RunResult r = run_cli("frames --config " + fixture("cylinder_helix_frames.json"));
    REQUIRE(r.exit_code == 0);
    const auto kg = csv_column(r.out, "k_g");
    CHECK(kg.size() == 64);
    for (double v : kg) CHECK(std::abs(v) < 1e-9);
    const auto kn = csv_column(r.out, "k_n");
    for (double v : kn) CHECK(v == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("frames: DSL plane line has all-zero invariant columns") {
    const RunResult r = run_cli("frames --config " + fixture("plane_line_frames.json"));
    REQUIRE(r.exit_code == 0);
    for (const char* col : {"k_g", "k_n", "tau_g"}) {
        for (double v : csv_column(r.out, col)) CHECK(std::abs(v) < 1e-12);
    }
}

TEST_CASE("frames: syntax error exits 2 and reports offset and expectation") {
    const RunResult r = run_cli("frames --config " + fixture("bad_syntax.json"));
    CHECK(r.exit_code == 2);
    REQUIRE(!r.err.empty());
    const auto first_line = split_lines(r.err)[0];
    CHECK(first_line.rfind("error: 2:", 0) == 0);
    CHECK(first_line.find("offset 5") != std::string::npos);
    CHECK(first_line.find(")") != std::string::npos);
}

TEST_CASE("frames: degenerate geometry exits 3") {
    const RunResult r = run_cli("frames --config " + fixture("cone_apex.json"));
    CHECK(r.exit_code == 3);
    REQUIRE(!r.err.empty());
    CHECK(split_lines(r.err)[0].rfind("error: 3:", 0) == 0);
}

TEST_CASE("pair: sphere latitude bundle has zero theta column") {
    const RunResult r = run_cli("pair --config " + fixture("sphere_pair.json"));
    REQUIRE(r.exit_code == 0);
    for (double v : csv_column(r.out, "theta")) CHECK(std::abs(v) < 1e-9);
    for (double v : csv_column(r.out, "speed_ratio")) {
        CHECK(v == doctest::Approx(1.3).epsilon(1e-9));
    }
}

TEST_CASE("pair: helix bundle has the closed-form constant speed ratio") {
    const RunResult r = run_cli("pair --config " + fixture("helix_pair.json"));
    REQUIRE(r.exit_code == 0);
    for (double v : csv_column(r.out, "speed_ratio")) {
        CHECK(std::abs(v - 1.1319231243575089) < 1e-6);
    }
    for (double v : csv_column(r.out, "lambda")) CHECK(v == 0.25);
}

TEST_CASE("pair: lambda = 0 is rejected as a config error") {
    const RunResult r = run_cli("pair --config " + fixture("lambda_zero.json"));
    CHECK(r.exit_code == 2);
    CHECK(split_lines(r.err)[0].rfind("error: 2:", 0) == 0);
}

TEST_CASE("pair: singular offset exits 4 and names the station") {
    const RunResult r = run_cli("pair --config " + fixture("helix_singular.json"));
    CHECK(r.exit_code == 4);
    const auto first_line = split_lines(r.err)[0];
    CHECK(first_line.rfind("error: 4:", 0) == 0);
    CHECK(first_line.find("s1") != std::string::npos);
}

TEST_CASE("config: unknown keys are errors") {
    const RunResult r = run_cli("pair --config " + fixture("unknown_key.json"));
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("wheels") != std::string::npos);
}

TEST_CASE("config: params next to a dsl spec are rejected") {
    const RunResult r = run_cli("frames --config " + fixture("dsl_with_params.json"));
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("params") != std::string::npos);
}

TEST_CASE("verify: helix report is exit 0 with CHAR15 tiny and CHAR14 split") {
    const RunResult r = run_cli("verify --config " + fixture("helix_pair.json") +
                                " --identities ALL --format json");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"id\": \"CHAR15\"") != std::string::npos);
    CHECK(r.out.find("\"eq28_ratio\": \"ds/ds1\"") != std::string::npos);
    // Identity order is fixed by the registry: COINCIDE comes first.
    const auto pos_coincide = r.out.find("\"id\": \"COINCIDE\"");
    const auto pos_char15 = r.out.find("\"id\": \"CHAR15\"");
    CHECK(pos_coincide < pos_char15);
}

TEST_CASE("verify: single-identity filter and unknown ids") {
    const RunResult ok = run_cli("verify --config " + fixture("sphere_pair.json") +
                                 " --identities COR3");
    REQUIRE(ok.exit_code == 0);
    CHECK(ok.out.find("\"id\": \"COR3\"") != std::string::npos);
    CHECK(ok.out.find("\"applicable\": false") != std::string::npos);
    CHECK(ok.out.find("sup-norm") != std::string::npos);

    const RunResult bad = run_cli("verify --config " + fixture("sphere_pair.json") +
                                  " --identities COR9");
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("COR9") != std::string::npos);
    CHECK(bad.err.find("CHAR15") != std::string::npos);
}

TEST_CASE("verify: an impossible coincidence tolerance trips exit 5") {
    const RunResult r = run_cli("verify --config " + fixture("coincide_fail.json"));
    CHECK(r.exit_code == 5);
    CHECK(split_lines(r.err)[0].rfind("error: 5:", 0) == 0);
}

TEST_CASE("catalog: alphabetized listing with parameters") {
    const RunResult r = run_cli("catalog");
    REQUIRE(r.exit_code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() >= 5);
    CHECK(lines[0].rfind("cylinder a=1", 0) == 0);
    CHECK(r.out.find("helicoid c=2") != std::string::npos);
    CHECK(r.out.find("sphere R=1") != std::string::npos);
    CHECK(r.out.find("torus R=2 r=0.5") != std::string::npos);
    // Piped output carries no color codes.
    CHECK(r.out.find("\033[") == std::string::npos);

    const RunResult j = run_cli("catalog --format json");
    REQUIRE(j.exit_code == 0);
    CHECK(j.out.find("\"name\": \"plane\"") != std::string::npos);
}

TEST_CASE("determinism: repeated runs produce byte-identical output") {
    for (const std::string& args :
         {std::string("frames --config ") + fixture("cylinder_helix_frames.json"),
          std::string("pair --config ") + fixture("sphere_pair.json"),
          std::string("verify --config ") + fixture("helix_pair.json"),
          std::string("catalog")}) {
        const RunResult a = run_cli(args);
        const RunResult b = run_cli(args);
        REQUIRE(a.exit_code == 0);
        REQUIRE(b.exit_code == 0);
        CHECK_MESSAGE(a.out == b.out, args);
    }
}

TEST_CASE("csv output uses LF line endings and round-trip precision") {
    const RunResult r = run_cli("frames --config " + fixture("cylinder_helix_frames.json"));
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find('\r') == std::string::npos);
    // 17 significant digits means every printed cell parses back bit-exactly.
    const auto lines = split_lines(r.out);
    for (std::size_t i = 1; i < std::min<std::size_t>(lines.size(), 6); ++i) {
        std::stringstream ss(lines[i]);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            if (cell == "nan") continue;
            const double v = std::strtod(cell.c_str(), nullptr);
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            CHECK(cell == buf);
        }
    }
}
