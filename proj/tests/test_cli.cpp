#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(STEPFIT_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

const std::filesystem::path& scratch_dir() {
    static const std::filesystem::path dir = [] {
        std::filesystem::path d =
            std::filesystem::temp_directory_path() / ("stepfit_cli_" + std::to_string(getpid()));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
    const std::filesystem::path p = scratch_dir() / name;
    std::ofstream out(p);
    out << content;
    return p.string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("fit").exit_code == 2);
    CHECK(run_cli("fit missing.csv --no-such-flag").exit_code == 2);
    CHECK(run_cli("bench-rates --family step --reps 2 --seed 1").exit_code == 2);

    RunResult help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.output.find("fit") != std::string::npos);
    CHECK(help.output.find("signal") != std::string::npos);
    CHECK(run_cli("fit --help").exit_code == 0);
}

TEST_CASE("data errors exit with code 3") {
    CHECK(run_cli("fit /no/such/file.csv --gamma 0.1").exit_code == 3);
    const std::string bad = write_file("bad.csv", "1\nfoo\n");
    RunResult r = run_cli("fit " + bad + " --gamma 0.1");
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("bad.csv:2") != std::string::npos);

    SUBCASE("a constant signal cannot calibrate the log rule") {
        const std::string flat = write_file("flat.csv", "2\n2\n2\n2\n2\n");
        RunResult c = run_cli("fit " + flat + " --select log");
        CHECK(c.exit_code == 3);
        CHECK(c.output.find("--gamma") != std::string::npos);
    }
}

TEST_CASE("fit reproduces the two-level example") {
    const std::string csv = write_file("steps.csv", "0\n0\n1\n1\n");

    SUBCASE("small penalty keeps the jump") {
        RunResult r = run_cli("fit " + csv + " --gamma 0.1");
        REQUIRE(r.exit_code == 0);
        json j = json::parse(r.output);
        CHECK(j["n"] == 4);
        CHECK(j["jumps"] == json::array({2}));
        CHECK(j["levels"] == json::array({0.0, 1.0}));
        CHECK(j["rss"] == 0.0);
        CHECK(j["gamma"] == 0.1);
        CHECK(j["h_value"].get<double>() == doctest::Approx(0.1).epsilon(1e-15));
    }

    SUBCASE("large penalty flattens the fit") {
        json j = json::parse(run_cli("fit " + csv + " --gamma 0.3").output);
        CHECK(j["jumps"].empty());
        CHECK(j["h_value"].get<double>() == doctest::Approx(0.25).epsilon(1e-15));
    }

    SUBCASE("csv format emits the fitted values") {
        RunResult r = run_cli("fit " + csv + " --gamma 0.1 --format csv");
        REQUIRE(r.exit_code == 0);
        CHECK(r.output == "0\n0\n1\n1\n");
    }

    SUBCASE("fitted values can be written alongside") {
        const std::string out = (scratch_dir() / "fitted.csv").string();
        REQUIRE(run_cli("fit " + csv + " --gamma 0.1 --fitted-csv " + out).exit_code == 0);
        CHECK(read_file(out) == "0\n0\n1\n1\n");
    }

    SUBCASE("gamma must be positive") {
        CHECK(run_cli("fit " + csv + " --gamma 0").exit_code == 2);
        CHECK(run_cli("fit " + csv + " --gamma -1").exit_code == 2);
    }

    SUBCASE("the residual criterion selects the jump at threshold zero") {
        json j = json::parse(run_cli("fit " + csv + " --select mr").output);
        CHECK(j["jumps"] == json::array({2}));
        CHECK(j["selection"]["k_selected"] == 1);
        CHECK(j["selection"]["gamma_hat"] == 0.25);
        CHECK(j["selection"]["passed"] == true);
        CHECK(j["selection"]["sigma_hat"] == 0.0);
        CHECK(j["selection"]["threshold"] == 0.0);
    }

    SUBCASE("unknown rules are usage errors") {
        CHECK(run_cli("fit " + csv + " --select bogus").exit_code == 2);
        CHECK(run_cli("fit " + csv + " --gamma 0.1 --format yaml").exit_code == 2);
    }
}

TEST_CASE("path lists budgets and the single knot") {
    const std::string csv = write_file("path.csv", "0\n0\n1\n1\n");
    RunResult r = run_cli("path " + csv);
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.output);
    CHECK(j["n"] == 4);
    CHECK(j["rss"] == json::array({1.0, 0.0, 0.0, 0.0}));
    CHECK(j["jumps"][1] == json::array({2}));
    REQUIRE(j["knots"].size() == 1);
    CHECK(j["knots"][0]["gamma"] == 0.25);
    CHECK(j["knots"][0]["k"] == 1);

    SUBCASE("k-max truncates the table") {
        json t = json::parse(run_cli("path " + csv + " --k-max 1").output);
        CHECK(t["rss"].size() == 2);
    }

    SUBCASE("k-max is validated") {
        CHECK(run_cli("path " + csv + " --k-max 0").exit_code == 2);
        CHECK(run_cli("path " + csv + " --k-max 9").exit_code == 2);
    }
}

TEST_CASE("select reports the criterion verdict with the fit attached") {
    const std::string csv = write_file("select.csv", "0\n0\n1\n1\n");
    json j = json::parse(run_cli("select " + csv).output);
    CHECK(j["gamma_hat"] == 0.25);
    CHECK(j["gamma_unbounded"] == false);
    CHECK(j["passed"] == true);
    CHECK(j["k_selected"] == 1);
    CHECK(j["fit"]["jumps"] == json::array({2}));

    SUBCASE("a constant input is optimal at every penalty") {
        const std::string flat = write_file("select_flat.csv", "1\n1\n1\n");
        json f = json::parse(run_cli("select " + flat).output);
        CHECK(f["gamma_unbounded"] == true);
        CHECK(f["gamma_hat"].is_null());
        CHECK(f["k_selected"] == 0);
    }
}

TEST_CASE("signal generates clean and noisy data") {
    SUBCASE("clean grid-aligned step") {
        RunResult r = run_cli(
            "signal --family step --jumps 0.5 --levels 0,1 --n 8 --clean");
        REQUIRE(r.exit_code == 0);
        CHECK(r.output == "0\n0\n0\n0\n1\n1\n1\n1\n");
    }

    SUBCASE("json format wraps the values") {
        json j = json::parse(
            run_cli("signal --family ramp --n 4 --clean --format json").output);
        CHECK(j["n"] == 4);
        REQUIRE(j["values"].size() == 4);
        CHECK(j["values"][0].get<double>() == doctest::Approx(0.125).epsilon(1e-15));
    }

    SUBCASE("noisy output is reproducible only through the seed") {
        const std::string args = "signal --family blocks --n 512 --snr 7 --seed 11";
        RunResult a = run_cli(args);
        RunResult b = run_cli(args);
        RunResult c = run_cli("signal --family blocks --n 512 --snr 7 --seed 12");
        REQUIRE(a.exit_code == 0);
        CHECK(a.output == b.output);
        CHECK(a.output != c.output);
        CHECK(lines_of(a.output).size() == 512);
    }

    SUBCASE("randomness requires an explicit seed") {
        CHECK(run_cli("signal --family blocks --n 64 --snr 7").exit_code == 2);
    }

    SUBCASE("clean and noise levels are mutually exclusive") {
        CHECK(run_cli("signal --family blocks --n 64 --clean --snr 7").exit_code == 2);
        CHECK(run_cli("signal --family blocks --n 64 --snr 7 --sigma 0.5 --seed 1").exit_code ==
              2);
        CHECK(run_cli("signal --family blocks --n 64").exit_code == 2);
    }

    SUBCASE("family-specific flags are checked") {
        CHECK(run_cli("signal --family step --n 8 --clean").exit_code == 2);
        CHECK(run_cli("signal --family blocks --jumps 0.5 --n 8 --clean").exit_code == 2);
        CHECK(run_cli("signal --family blocks --alpha 0.3 --n 8 --clean").exit_code == 2);
        CHECK(run_cli("signal --family holder --alpha 0.3 --n 8 --clean").exit_code == 0);
        CHECK(run_cli("signal --family nosuch --n 8 --clean").exit_code == 2);
    }
}

TEST_CASE("metrics compares two step functions from json") {
    const std::string a =
        write_file("fa.json", R"({"breakpoints": [0.2], "levels": [0, 1]})");
    const std::string b =
        write_file("fb.json", R"({"breakpoints": [0.25], "levels": [0, 1]})");

    RunResult r = run_cli("metrics " + a + " " + b + " --l2 --hausdorff --skorokhod");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.output);
    CHECK(j["l2"].get<double>() == doctest::Approx(std::sqrt(0.05)).epsilon(1e-12));
    CHECK(j["hausdorff"].get<double>() == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(j["skorokhod"].get<double>() == doctest::Approx(std::log(1.25)).epsilon(1e-12));
    CHECK(j["skorokhod_time_term"].get<double>() ==
          doctest::Approx(std::log(1.25)).epsilon(1e-12));
    CHECK(j["skorokhod_level_term"] == 0.0);

    SUBCASE("a single metric emits only its key") {
        json h = json::parse(run_cli("metrics " + a + " " + b + " --hausdorff").output);
        CHECK(h.size() == 1);
        CHECK(h.contains("hausdorff"));
    }

    SUBCASE("at least one metric flag is required") {
        CHECK(run_cli("metrics " + a + " " + b).exit_code == 2);
    }

    SUBCASE("malformed step functions are data errors") {
        const std::string bad = write_file("fbad.json", R"({"breakpoints": [0.5]})");
        CHECK(run_cli("metrics " + a + " " + bad + " --l2").exit_code == 3);
        const std::string notjson = write_file("fnot.json", "hello");
        CHECK(run_cli("metrics " + a + " " + notjson + " --l2").exit_code == 3);
    }
}

TEST_CASE("bench-rates summarizes slopes deterministically") {
    const std::string base =
        "bench-rates --family step --jumps 0.25,0.5,0.75 --levels 0,1,-0.5,0.8 "
        "--ns 64,128 --reps 3 --seed 20260822";
    const std::string csv_path = (scratch_dir() / "rates.csv").string();
    RunResult a = run_cli(base + " --out-csv " + csv_path);
    REQUIRE(a.exit_code == 0);
    json j = json::parse(a.output);
    CHECK(j["metric"] == "l2");
    REQUIRE(j["points"].size() == 2);
    CHECK(j["points"][0]["n"] == 64);
    CHECK(j["points"][0]["mean"].get<double>() > 0.0);
    CHECK(j["slope_defined"] == true);
    CHECK(j["slope"].get<double>() < 0.0);

    const std::vector<std::string> rows = lines_of(read_file(csv_path));
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == "n,replicate,seed,sigma,sigma_hat,gamma,jump_count,value");
    CHECK(rows[1].substr(0, 5) == "64,0,");

    SUBCASE("repeated runs are byte-identical") {
        RunResult b = run_cli(base + " --out-csv " + csv_path);
        CHECK(a.output == b.output);
        CHECK(lines_of(read_file(csv_path)) == rows);
    }

    SUBCASE("a one-point grid cannot give a slope") {
        CHECK(run_cli("bench-rates --family step --jumps 0.5 --levels 0,1 "
                      "--ns 64 --reps 2 --seed 1")
                  .exit_code == 2);
    }

    SUBCASE("metric and rule flags are validated") {
        CHECK(run_cli(base + " --metric nosuch").exit_code == 2);
        CHECK(run_cli(base + " --rule nosuch").exit_code == 2);
    }
}

TEST_CASE("bench-recovery counts exact jump matches") {
    const std::string csv_path = (scratch_dir() / "recovery.csv").string();
    RunResult r = run_cli(
        "bench-recovery --family step --jumps 0.25,0.5,0.75 --levels 0,1,-0.5,0.8 "
        "--ns 256 --reps 2 --seed 7 --snr 50 --out-csv " +
        csv_path);
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.output);
    REQUIRE(j["points"].size() == 1);
    CHECK(j["points"][0]["match_fraction"] == 1.0);
    CHECK(j["points"][0]["mean_hausdorff"] == 0.0);
    CHECK(j["points"][0]["mean_scaled_hausdorff"] == 0.0);

    const std::vector<std::string> rows = lines_of(read_file(csv_path));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "n,replicate,seed,jump_count,match,hausdorff");
    CHECK(rows[1] == "256,0,7,3,1,0");

    SUBCASE("non-constant families are rejected") {
        CHECK(run_cli("bench-recovery --family doppler --ns 256 --reps 2 --seed 7").exit_code ==
              2);
    }
}

TEST_CASE("bench-cn tabulates the noise scan statistic") {
    const std::string csv_path = (scratch_dir() / "cn.csv").string();
    RunResult r = run_cli("bench-cn --ns 200,400 --reps 4 --seed 5 --out-csv " + csv_path);
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.output);
    REQUIRE(j["points"].size() == 2);
    for (const auto& pt : j["points"]) {
        CHECK(pt["mean"].get<double>() > 0.5);
        CHECK(pt["q25"].get<double>() <= pt["median"].get<double>());
        CHECK(pt["median"].get<double>() <= pt["q75"].get<double>());
    }
    const std::vector<std::string> rows = lines_of(read_file(csv_path));
    REQUIRE(rows.size() == 9);
    CHECK(rows[0] == "n,replicate,seed,cn");
}

TEST_CASE("figure1 writes the full reconstruction bundle") {
    const std::string dir = (scratch_dir() / "fig").string();
    RunResult r = run_cli("figure1 --seed 11 --out-dir " + dir);
    REQUIRE(r.exit_code == 0);

    int files = 0;
    for (const char* fam : {"blocks", "bumps", "heavisine", "doppler"}) {
        for (const char* snr : {"7", "4", "1"}) {
            for (const char* kind : {"clean", "noisy", "fit"}) {
                const std::string p =
                    dir + "/" + fam + "_snr" + snr + "_" + kind + ".csv";
                CHECK(std::filesystem::exists(p));
                ++files;
            }
        }
    }
    CHECK(files == 36);
    CHECK(lines_of(read_file(dir + "/blocks_snr7_clean.csv")).size() == 2048);

    json summary = json::parse(read_file(dir + "/summary.json"));
    REQUIRE(summary.size() == 12);
    CHECK(summary[0]["family"] == "blocks");
    CHECK(summary[0]["snr"] == 7.0);
    CHECK(summary[0]["n"] == 2048);
    CHECK(summary[0]["jump_count"].get<int>() > 0);

    SUBCASE("the seed is required") {
        CHECK(run_cli("figure1 --out-dir " + dir).exit_code == 2);
    }
}

TEST_CASE("output files are preflighted before long runs") {
    RunResult r = run_cli(
        "bench-rates --family step --jumps 0.5 --levels 0,1 --ns 64,128 --reps 1 "
        "--seed 1 --out /no/such/dir/out.json");
    CHECK(r.exit_code != 0);
    CHECK(r.output.find("/no/such/dir") != std::string::npos);
}
