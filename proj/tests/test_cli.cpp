// End-to-end checks of the command line tool: exit codes, the pinned CSV
// schema, JSON output, config handling, and rerun determinism. The binary
// path arrives via the BNSMC_CLI environment variable set by CTest.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

std::string cli_path() {
    const char* env = std::getenv("BNSMC_CLI");
    REQUIRE_MESSAGE(env != nullptr, "BNSMC_CLI must point at the CLI binary");
    return env;
}

CommandResult run_cli(const std::string& args) {
    const std::string command = cli_path() + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    CommandResult result;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::fgets(buf.data(), buf.size(), pipe)) result.output += buf.data();
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_csv_row(const std::string& row) {
    std::vector<std::string> fields;
    std::stringstream ss(row);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

// the time_sec column (index 7) is wall time and exempt from byte identity
std::string mask_time_column(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        auto fields = split_csv_row(line);
        if (fields.size() == 9) fields[7] = "<time>";
        for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + fields[i];
        out += "\n";
    }
    return out;
}

constexpr const char* kHeader =
    "alpha,M,L,error_terminal_pct,error_asian_pct,stderr_terminal,stderr_asian,time_sec,seed";

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("bnsmc_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

}  // namespace

TEST_CASE("validate: exit codes and margin output") {
    const CommandResult ok = run_cli("validate");
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("condition 1") != std::string::npos);
    CHECK(ok.output.find("margin") != std::string::npos);
    CHECK(ok.output.find("parameters valid") != std::string::npos);

    const CommandResult bad_b = run_cli("validate --b 1");
    CHECK(bad_b.exit_code == 2);
    CHECK(bad_b.output.find("condition 1") != std::string::npos);
    CHECK(bad_b.output.find("VIOLATED") != std::string::npos);

    const CommandResult bad_alpha = run_cli("validate --alpha -0.01");
    CHECK(bad_alpha.exit_code == 2);
    CHECK(bad_alpha.output.find("condition 2") != std::string::npos);

    const CommandResult malformed = run_cli("validate --alpha not_a_number");
    CHECK(malformed.exit_code == 1);
    CHECK(malformed.output.find("alpha") != std::string::npos);

    CHECK(run_cli("no-such-command").exit_code == 1);
}

TEST_CASE("simulate: smoke run emits well-formed CSV with the pinned schema") {
    TempDir tmp;
    const fs::path out = tmp.path / "smoke.csv";
    const CommandResult run =
        run_cli("simulate --steps 4 --paths 2 --seed 7 --out " + out.string());
    CHECK(run.exit_code == 0);
    const std::string csv = read_file(out);
    std::istringstream in(csv);
    std::string header, row, extra;
    REQUIRE(std::getline(in, header));
    CHECK(header == kHeader);
    REQUIRE(std::getline(in, row));
    const auto fields = split_csv_row(row);
    REQUIRE(fields.size() == 9);
    CHECK(fields[0] == "0.1");
    CHECK(fields[1] == "4");
    CHECK(fields[2] == "2");
    CHECK(fields[8] == "7");
    CHECK_FALSE(std::getline(in, extra));
}

TEST_CASE("simulate: JSON output parses and carries one report per estimand") {
    TempDir tmp;
    const fs::path out = tmp.path / "report.json";
    const CommandResult run = run_cli(
        "simulate --steps 8 --paths 64 --seed 11 --format json --out " + out.string());
    CHECK(run.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(read_file(out));
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 2);
    CHECK(j[0]["estimand"] == "terminal_mean");
    CHECK(j[1]["estimand"] == "asian_mean");
    for (const auto& item : j) {
        CHECK(item["algorithm"] == "algo2");
        CHECK(item["point"].is_number());
        CHECK(item["std_error"].is_number());
        CHECK(item["error_percent"].is_number());
        CHECK(item["strike"].is_null());
        CHECK(item["M"] == 8);
        CHECK(item["L"] == 64);
        CHECK(item["seed"] == 11);
    }
}

TEST_CASE("simulate: reruns are byte-identical outside the time column") {
    TempDir tmp;
    const fs::path out1 = tmp.path / "a.csv";
    const fs::path out2 = tmp.path / "b.csv";
    const std::string args = "simulate --steps 16 --paths 256 --seed 5 --algo algo1 ";
    CHECK(run_cli(args + "--workers 1 --out " + out1.string()).exit_code == 0);
    CHECK(run_cli(args + "--workers 2 --out " + out2.string()).exit_code == 0);
    CHECK(mask_time_column(read_file(out1)) == mask_time_column(read_file(out2)));
}

TEST_CASE("simulate: config file with sections, flags win") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "run.ini";
    {
        std::ofstream out(cfg);
        out << "[model]\nalpha = 0.05\n\n[run]\nsteps = 4\npaths = 32\nseed = 3\n";
    }
    const fs::path out = tmp.path / "cfg.csv";
    const CommandResult run =
        run_cli("simulate --config " + cfg.string() + " --out " + out.string());
    CHECK(run.exit_code == 0);
    auto fields = split_csv_row(read_file(out).substr(std::string(kHeader).size() + 1));
    REQUIRE(fields.size() == 9);
    CHECK(fields[0] == "0.05");
    CHECK(fields[1] == "4");
    CHECK(fields[2] == "32");

    const CommandResult with_flag =
        run_cli("simulate --config " + cfg.string() + " --alpha 0.2 --out " + out.string());
    CHECK(with_flag.exit_code == 0);
    fields = split_csv_row(read_file(out).substr(std::string(kHeader).size() + 1));
    CHECK(fields[0] == "0.2");
}

TEST_CASE("price: JSON with strike, both payoffs") {
    const CommandResult run =
        run_cli("price --strike 470 --steps 8 --paths 64 --seed 13 --alpha 1");
    CHECK(run.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(run.output);
    REQUIRE(j.size() == 2);
    CHECK(j[0]["estimand"] == "euro_call");
    CHECK(j[1]["estimand"] == "asian_call");
    CHECK(j[0]["strike"] == 470.0);
    CHECK(j[0]["error_percent"].is_null());

    CHECK(run_cli("price --steps 4 --paths 8").exit_code == 1);  // --strike required
}

TEST_CASE("oracle-check: passes on the benchmark set") {
    const CommandResult run = run_cli("oracle-check");
    CHECK(run.exit_code == 0);
    CHECK(run.output.find("levy_moment_1") != std::string::npos);
    CHECK(run.output.find("ar_mass_3") != std::string::npos);
    CHECK(run.output.find("FAIL") == std::string::npos);
    CHECK(run.output.find("all oracle checks passed") != std::string::npos);
}

TEST_CASE("reproduce-tables: heavily scaled-down run completes every row") {
    TempDir tmp;
    const CommandResult run =
        run_cli("reproduce-tables --scale 2000 --seed 17 --out-dir " + tmp.path.string());
    CHECK(run.exit_code == 0);
    CHECK(run.output.find("EXPECTED_DIVERGENCE") != std::string::npos);
    CHECK(run.output.find("FAILED") == std::string::npos);

    const std::string t1 = read_file(tmp.path / "table1.csv");
    const std::string t2 = read_file(tmp.path / "table2.csv");
    CHECK(t1.rfind(kHeader, 0) == 0);
    CHECK(t2.rfind(kHeader, 0) == 0);
    auto count_rows = [](const std::string& csv) {
        std::istringstream in(csv);
        std::string line;
        int rows = -1;  // skip header
        while (std::getline(in, line)) ++rows;
        return rows;
    };
    CHECK(count_rows(t1) == 5);
    CHECK(count_rows(t2) == 8);
    // L scaled down to max(2, L / 2000)
    CHECK(t1.find(",100,50,") != std::string::npos);
    CHECK(t2.find(",20000,5,") != std::string::npos);
}
