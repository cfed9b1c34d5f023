#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

#include "slkl/bench.hpp"

using namespace slkl;
using namespace slkl::bench;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& tag)
{
    const fs::path dir = fs::temp_directory_path() / ("slkl_bench_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    return dir;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path)
{
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(path);
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

ExperimentConfig small_config()
{
    ExperimentConfig config;
    config.n_train = 80;
    config.n_test = 50;
    config.m_values = {10, 20};
    config.runs = 3;
    config.seed = 5;
    return config;
}

} // namespace

TEST_CASE("apply_setting")
{
    ExperimentConfig config;
    apply_setting(config, "m-values", "16, 32,64");
    CHECK(config.m_values == std::vector<std::size_t>{16, 32, 64});
    apply_setting(config, "methods", "slkl,unif");
    CHECK(config.methods == std::vector<Method>{Method::slkl, Method::unif});
    apply_setting(config, "methods", "all");
    CHECK(config.methods.size() == 4);
    apply_setting(config, "nu", "0.05");
    CHECK(config.nu == 0.05);
    apply_setting(config, "max_iters", "5000");
    CHECK(config.max_iters == 5000);
    apply_setting(config, "column-mode", "on_the_fly");
    CHECK(config.column_mode == ColumnMode::on_the_fly);
    apply_setting(config, "header", "true");
    CHECK(config.header);
    apply_setting(config, "n-test", "123");
    CHECK(config.n_test == 123u);

    CHECK_THROWS_AS(apply_setting(config, "colour", "blue"), ConfigError);
    CHECK_THROWS_AS(apply_setting(config, "runs", "many"), ConfigError);
    CHECK_THROWS_AS(apply_setting(config, "runs", "-3"), ConfigError);
    CHECK_THROWS_AS(apply_setting(config, "methods", "slkl,svm"), ConfigError);
    CHECK_THROWS_AS(apply_setting(config, "header", "perhaps"), ConfigError);
}

TEST_CASE("ExperimentConfig validation")
{
    ExperimentConfig config;
    CHECK_NOTHROW(config.validate());
    config.dataset = "file";
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = ExperimentConfig{};
    config.nu = 0.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = ExperimentConfig{};
    config.max_iters = 100;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = ExperimentConfig{};
    config.m_values = {2000};
    CHECK_THROWS_AS(run_experiment(config), ConfigError);
}

TEST_CASE("config text sections and overrides")
{
    const std::string text = "# shared\n"
                             "runs = 4\n"
                             "nu = 0.02\n"
                             "outdir = out\n"
                             "\n"
                             "[small]\n"
                             "m-values = 8, 16   # inline comment\n"
                             "[large]\n"
                             "m_values = 64\n"
                             "nu = 0.5\n";
    const auto sections = parse_config_text(text);
    REQUIRE(sections.size() == 3);
    CHECK(sections[0].name.empty());
    CHECK(sections[1].name == "small");

    const auto configs = resolve_configs(sections, {{"runs", "2"}});
    REQUIRE(configs.size() == 2);
    CHECK(configs[0].name == "small");
    CHECK(configs[0].runs == 2);
    CHECK(configs[0].nu == 0.02);
    CHECK(configs[0].m_values == std::vector<std::size_t>{8, 16});
    CHECK(configs[0].outdir == fs::path("out") / "small");
    CHECK(configs[1].nu == 0.5);
    CHECK(configs[1].m_values == std::vector<std::size_t>{64});

    const auto single = resolve_configs(parse_config_text("lambda = 2\n"), {{"seed", "9"}});
    REQUIRE(single.size() == 1);
    CHECK(single[0].lambda == 2.0);
    CHECK(single[0].seed == 9);
    CHECK(single[0].outdir == fs::path("results"));

    CHECK_THROWS_AS(parse_config_text("[broken\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("just words\n"), ConfigError);
    CHECK_THROWS_AS(resolve_configs(parse_config_text("speed = 3\n"), {}), ConfigError);
    CHECK_THROWS_AS(parse_config_file("/nonexistent/slkl.cfg"), ConfigError);
}

TEST_CASE("run_experiment records and aggregates")
{
    const ExperimentConfig config = small_config();
    const ExperimentReport report = run_experiment(config);

    // krrn once per run, the other methods once per run and M
    CHECK(report.records.size() == 3 * (1 + 3 * 2));
    for (const auto& r : report.records) {
        CHECK(r.seed >= 5);
        CHECK(r.seed < 8);
        CHECK(std::isfinite(r.mse));
        CHECK(r.mse >= 0.0);
        if (r.method == Method::slkl) CHECK(r.m0 <= r.M);
        if (r.method == Method::krrn) CHECK(r.M == 80);
    }
    for (const auto& t : report.traces) {
        const auto& history = t.trace.objective_history;
        REQUIRE(history.size() == t.trace.iterations + 1);
        CHECK(history.back() < history.front());
    }

    // independent aggregation pass
    std::map<std::pair<Method, std::size_t>, std::vector<const RunRecord*>> groups;
    for (const auto& r : report.records) groups[{r.method, r.M}].push_back(&r);
    CHECK(report.cells.size() == groups.size());
    for (const auto& cell : report.cells) {
        const auto& members = groups.at({cell.method, cell.M});
        REQUIRE(cell.runs == members.size());
        double sum = 0.0;
        double m0_sum = 0.0;
        for (const auto* r : members) {
            sum += r->mse;
            m0_sum += static_cast<double>(r->m0);
        }
        const double mean = sum / static_cast<double>(members.size());
        double ss = 0.0;
        for (const auto* r : members) ss += (r->mse - mean) * (r->mse - mean);
        const double sd = std::sqrt(ss / static_cast<double>(members.size() - 1));
        CHECK(cell.mse_mean == doctest::Approx(mean).epsilon(1e-14));
        CHECK(cell.mse_std == doctest::Approx(sd).epsilon(1e-12));
        CHECK(cell.m0_mean == doctest::Approx(m0_sum / static_cast<double>(members.size())).epsilon(1e-14));
    }

    // krrm on all training points is krrn
    ExperimentConfig full = small_config();
    full.m_values = {80};
    full.methods = {Method::krrn, Method::krrm};
    full.runs = 1;
    const ExperimentReport both = run_experiment(full);
    REQUIRE(both.records.size() == 2);
    CHECK(both.records[0].mse == doctest::Approx(both.records[1].mse).epsilon(1e-12));
}

TEST_CASE("report is deterministic and parallel-safe")
{
    ExperimentConfig config = small_config();
    config.runs = 1;
    const fs::path first = scratch_dir("first");
    const fs::path second = scratch_dir("second");
    config.outdir = first;
    write_report(run_experiment(config));
    config.outdir = second;
    write_report(run_experiment(config));
    CHECK(read_file(first / "summary.csv") == read_file(second / "summary.csv"));
    CHECK(!read_file(first / "summary.csv").empty());

    ExperimentConfig serial = small_config();
    ExperimentConfig parallel = small_config();
    parallel.jobs = 3;
    CHECK(format_summary_csv(run_experiment(serial).cells) == format_summary_csv(run_experiment(parallel).cells));

    CHECK(fs::exists(first / "runs.csv"));
    CHECK(fs::exists(first / "report.txt"));
    CHECK(fs::exists(first / "runs" / "slkl_10_5.csv"));
    CHECK(fs::exists(first / "runs" / "slkl_20_5.csv"));
    const auto trace = read_csv(first / "runs" / "slkl_10_5.csv");
    REQUIRE(trace.size() >= 2);
    CHECK(trace[0][0] == "0");
    CHECK(std::stod(trace.back()[1]) < std::stod(trace.front()[1]));
    for (std::size_t k = 1; k < trace.size(); ++k) CHECK(std::stoul(trace[k][0]) == k);

    const std::string table = read_file(first / "report.txt");
    CHECK(table.find("m0") != std::string::npos);
    CHECK(table.find("slkl") != std::string::npos);
    fs::remove_all(first);
    fs::remove_all(second);
}

TEST_CASE("krrn above the size cap is skipped")
{
    ExperimentConfig config = small_config();
    config.krrn_cap = 50;
    config.runs = 2;
    const ExperimentReport report = run_experiment(config);
    for (const auto& r : report.records) CHECK(r.skipped == (r.method == Method::krrn));
    bool found = false;
    for (const auto& cell : report.cells) {
        if (cell.method == Method::krrn) {
            found = true;
            CHECK(cell.skipped);
        } else {
            CHECK(!cell.skipped);
            CHECK(cell.runs == 2);
        }
    }
    CHECK(found);
    CHECK(format_summary_csv(report.cells).find("skipped") != std::string::npos);
}

TEST_CASE("delimited file experiments")
{
    const fs::path dir = scratch_dir("file");
    fs::create_directories(dir);
    const fs::path data = dir / "data.csv";
    {
        std::ofstream out(data);
        out << "kind,a,b,target\n";
        for (int i = 0; i < 60; ++i) {
            const double a = 0.1 * i;
            const double b = std::cos(0.3 * i);
            out << (i % 3 == 0 ? "x" : "y") << "," << a << "," << b << "," << std::sin(a) + b << "\n";
        }
    }
    ExperimentConfig config;
    config.dataset = "file";
    config.data_file = data;
    config.header = true;
    config.categorical_cols = {0};
    config.n_train = 40;
    config.m_values = {10};
    config.runs = 2;
    const ExperimentReport report = run_experiment(config);
    CHECK(report.records.size() == 2 * 4);
    for (const auto& r : report.records) CHECK(std::isfinite(r.mse));
    fs::remove_all(dir);
}

TEST_CASE("sweep_m0")
{
    ExperimentConfig config = small_config();
    config.runs = 2;

    const SweepReport empty = sweep_m0(config, {10, 20}, {1e6});
    for (const auto& cell : empty.cells) CHECK(cell.m0_mean == 0.0);

    const SweepReport report = sweep_m0(config, {10, 40}, {0.001, 0.1});
    CHECK(report.cells.size() == 4);
    CHECK(report.records.size() == 2 * 4);

    const fs::path dir = scratch_dir("sweep");
    write_sweep(report, dir);
    const auto runs = read_csv(dir / "sweep_runs.csv");
    const auto grid = read_csv(dir / "m0_grid.csv");
    REQUIRE(runs.size() == report.records.size());
    REQUIRE(grid.size() == report.cells.size());
    std::map<std::pair<std::string, std::string>, std::pair<double, int>> sums;
    for (const auto& row : runs) {
        auto& entry = sums[{row[1], row[2]}];
        entry.first += std::stod(row[3]);
        entry.second += 1;
    }
    for (const auto& row : grid) {
        const auto& entry = sums.at({row[0], row[1]});
        CHECK(std::stoi(row[2]) == entry.second);
        CHECK(std::stod(row[3]) == doctest::Approx(entry.first / entry.second).epsilon(1e-9));
    }
    CHECK(fs::exists(dir / "m0_trends.txt"));
    fs::remove_all(dir);

    CHECK_THROWS_AS(sweep_m0(config, {}, {0.1}), ConfigError);
}
