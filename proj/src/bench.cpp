#include "slkl/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "slkl/datasets.hpp"
#include "slkl/regression.hpp"

namespace slkl::bench {

std::string_view to_string(Method method)
{
    switch (method) {
    case Method::slkl: return "slkl";
    case Method::krrn: return "krrn";
    case Method::krrm: return "krrm";
    case Method::unif: return "unif";
    }
    return "?";
}

Method parse_method(std::string_view text)
{
    if (text == "slkl") return Method::slkl;
    if (text == "krrn") return Method::krrn;
    if (text == "krrm") return Method::krrm;
    if (text == "unif") return Method::unif;
    throw ConfigError("unknown method '" + std::string(text) + "'");
}

namespace {

std::string strip(const std::string& text)
{
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        item = strip(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <class T>
T parse_value(const std::string& key, const std::string& text)
{
    std::istringstream in(strip(text));
    T value{};
    in >> value;
    if (in.fail() || !in.eof()) throw ConfigError("bad value '" + text + "' for key '" + key + "'");
    return value;
}

std::size_t parse_count(const std::string& key, const std::string& text)
{
    const auto value = parse_value<long long>(key, text);
    if (value < 0) throw ConfigError("key '" + key + "' must be nonnegative");
    return static_cast<std::size_t>(value);
}

bool parse_bool(const std::string& key, const std::string& text)
{
    const auto value = strip(text);
    if (value == "true" || value == "1" || value == "yes" || value.empty()) return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("bad boolean '" + text + "' for key '" + key + "'");
}

double mean_of(const std::vector<double>& values)
{
    double sum = 0.0;
    for (double v : values) sum += v;
    return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

double sample_std(const std::vector<double>& values)
{
    if (values.size() < 2) return 0.0;
    const double mean = mean_of(values);
    double sum = 0.0;
    for (double v : values) sum += (v - mean) * (v - mean);
    return std::sqrt(sum / static_cast<double>(values.size() - 1));
}

std::string fmt(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

/// Runs task(i) for i in [0, count) on up to `jobs` threads; rethrows the
/// first failure.
template <class Task>
void parallel_for(std::size_t count, std::size_t jobs, Task task)
{
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
        for (auto& thread : threads) thread.join();
    }
    if (failure) std::rethrow_exception(failure);
}

struct Source {
    std::optional<Dataset> full;

    explicit Source(const ExperimentConfig& config)
    {
        if (config.dataset == "file") {
            DelimitedOptions options;
            options.target_column = config.target_col;
            options.delimiter = config.delimiter;
            options.header = config.header;
            options.categorical_columns = config.categorical_cols;
            full = load_delimited(config.data_file, options);
            full->validate();
        }
    }

    TrainTest draw(const ExperimentConfig& config, std::uint64_t seed) const
    {
        if (!full) return gen_sinc(config.n_train, config.n_test.value_or(1000), config.snr_db, seed);
        const std::size_t n_test = config.n_test.value_or(full->size() - std::min(full->size(), config.n_train));
        TrainTest split = split_dataset(*full, {config.n_train, n_test, seed});
        const std::vector<Dataset> others{split.test};
        Standardized scaled = standardize(split.train, others);
        return {std::move(scaled.train), std::move(scaled.others.front())};
    }
};

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

TrainConfig train_config(const ExperimentConfig& config, std::size_t M, double nu, std::uint64_t seed)
{
    TrainConfig out;
    out.nu = nu;
    out.lambda = config.lambda;
    out.M = M;
    out.epsilon = config.epsilon;
    out.max_iters = config.max_iters;
    out.seed = seed;
    out.column_mode = config.column_mode;
    out.newton_denominator = config.newton_denominator;
    return out;
}

struct RunOutput {
    std::vector<RunRecord> records;
    std::vector<RunTrace> traces;
};

RunOutput execute_run(const ExperimentConfig& config, const Source& source, std::uint64_t seed)
{
    using clock = std::chrono::steady_clock;
    RunOutput out;
    const TrainTest data = source.draw(config, seed);
    const KernelSpec spec = KernelSpec::gaussian(config.sigma2);
    const auto has = [&](Method m) {
        return std::find(config.methods.begin(), config.methods.end(), m) != config.methods.end();
    };
    const auto base_record = [&](Method method, std::size_t M) {
        RunRecord record;
        record.seed = seed;
        record.method = method;
        record.M = M;
        record.nu = config.nu;
        record.lambda = config.lambda;
        return record;
    };

    if (has(Method::krrn)) {
        RunRecord record = base_record(Method::krrn, data.train.size());
        const auto start = clock::now();
        try {
            const KrrPredictor krr = krr_full(spec, data.train, config.lambda, config.krrn_cap);
            record.mse = mse(krr.predict(data.test.features), data.test.targets);
            record.m0 = data.train.size();
        } catch (const CapacityError&) {
            record.skipped = true;
        }
        record.wall_seconds = seconds_since(start);
        out.records.push_back(record);
    }

    for (const std::size_t M : config.m_values) {
        if (M > data.train.size()) throw ConfigError("M = " + std::to_string(M) + " exceeds n_train");
        const TrainConfig tc = train_config(config, M, config.nu, seed);
        const std::vector<std::size_t> candidates = sample_candidates(data.train.size(), M, seed);

        std::optional<ColumnSource> columns;
        const auto column_source = [&]() -> const ColumnSource& {
            if (!columns) columns.emplace(spec, data.train, candidates, config.column_mode);
            return *columns;
        };

        if (has(Method::slkl)) {
            RunRecord record = base_record(Method::slkl, M);
            const auto start = clock::now();
            TrainResult result = train_slkl(column_source(), data.train, tc);
            record.wall_seconds = seconds_since(start);
            record.mse = mse(predict(result.model, spec, data.test.features), data.test.targets);
            record.m0 = result.model.support_size();
            record.iterations = result.trace.iterations;
            record.stop_reason = std::string(to_string(result.trace.stop_reason));
            out.records.push_back(record);
            out.traces.push_back({Method::slkl, M, seed, std::move(result.trace)});
        }
        if (has(Method::krrm)) {
            RunRecord record = base_record(Method::krrm, M);
            const auto start = clock::now();
            const KrrPredictor krr = krr_subset(spec, data.train, candidates, config.lambda, config.krrn_cap);
            record.mse = mse(krr.predict(data.test.features), data.test.targets);
            record.m0 = M;
            record.wall_seconds = seconds_since(start);
            out.records.push_back(record);
        }
        if (has(Method::unif)) {
            RunRecord record = base_record(Method::unif, M);
            const auto start = clock::now();
            const ModelSolution model = unif_baseline(column_source(), data.train, config.lambda);
            record.mse = mse(predict(model, spec, data.test.features), data.test.targets);
            record.m0 = model.support_size();
            record.wall_seconds = seconds_since(start);
            out.records.push_back(record);
        }
    }
    return out;
}

bool record_order(const RunRecord& a, const RunRecord& b)
{
    if (a.method != b.method) return a.method < b.method;
    if (a.M != b.M) return a.M < b.M;
    if (a.nu != b.nu) return a.nu < b.nu;
    return a.seed < b.seed;
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

} // namespace

void ExperimentConfig::validate() const
{
    if (dataset != "sinc" && dataset != "file") throw ConfigError("dataset must be 'sinc' or 'file'");
    if (dataset == "file" && data_file.empty()) throw ConfigError("dataset 'file' needs data-file");
    if (n_train < 1) throw ConfigError("n-train must be positive");
    if (methods.empty()) throw ConfigError("methods must not be empty");
    if (m_values.empty()) throw ConfigError("m-values must not be empty");
    for (auto M : m_values) {
        if (M < 1) throw ConfigError("every M must be positive");
        if (max_iters != 0 && max_iters < M) throw ConfigError("max-iters must be at least every M");
    }
    if (!(nu > 0.0)) throw ConfigError("nu must be positive");
    for (double v : nu_values) {
        if (!(v > 0.0)) throw ConfigError("nu-values must be positive");
    }
    if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(sigma2 > 0.0)) throw ConfigError("sigma2 must be positive");
    if (runs < 1) throw ConfigError("runs must be positive");
    if (jobs < 1) throw ConfigError("jobs must be positive");
}

void apply_setting(ExperimentConfig& config, const std::string& raw_key, const std::string& raw_value)
{
    std::string key = strip(raw_key);
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string value = strip(raw_value);
    try {
        if (key == "dataset") config.dataset = value;
        else if (key == "data-file") config.data_file = value;
        else if (key == "target-col") config.target_col = parse_value<long>(key, value);
        else if (key == "delimiter") {
            if (value == "comma" || value == ",") config.delimiter = ',';
            else if (value == "whitespace" || value == "space") config.delimiter = ' ';
            else if (value == "semicolon" || value == ";") config.delimiter = ';';
            else throw ConfigError("delimiter must be comma, whitespace or semicolon");
        }
        else if (key == "header") config.header = parse_bool(key, value);
        else if (key == "categorical-cols") {
            config.categorical_cols.clear();
            for (const auto& item : split_list(value)) config.categorical_cols.push_back(parse_count(key, item));
        }
        else if (key == "n-train") config.n_train = parse_count(key, value);
        else if (key == "n-test") config.n_test = parse_count(key, value);
        else if (key == "snr-db") config.snr_db = parse_value<double>(key, value);
        else if (key == "sigma2") config.sigma2 = parse_value<double>(key, value);
        else if (key == "methods") {
            config.methods.clear();
            for (const auto& item : split_list(value)) {
                if (item == "all") {
                    config.methods = {Method::slkl, Method::krrn, Method::krrm, Method::unif};
                    break;
                }
                config.methods.push_back(parse_method(item));
            }
        }
        else if (key == "m-values") {
            config.m_values.clear();
            for (const auto& item : split_list(value)) config.m_values.push_back(parse_count(key, item));
        }
        else if (key == "nu") config.nu = parse_value<double>(key, value);
        else if (key == "nu-values") {
            config.nu_values.clear();
            for (const auto& item : split_list(value)) config.nu_values.push_back(parse_value<double>(key, item));
        }
        else if (key == "lambda") config.lambda = parse_value<double>(key, value);
        else if (key == "epsilon") config.epsilon = parse_value<double>(key, value);
        else if (key == "runs") config.runs = parse_count(key, value);
        else if (key == "seed") config.seed = parse_value<std::uint64_t>(key, value);
        else if (key == "max-iters") config.max_iters = parse_count(key, value);
        else if (key == "column-mode") config.column_mode = parse_column_mode(value);
        else if (key == "newton-denominator") config.newton_denominator = parse_newton_denominator(value);
        else if (key == "outdir") config.outdir = value;
        else if (key == "jobs") config.jobs = parse_count(key, value);
        else if (key == "krrn-cap") config.krrn_cap = parse_count(key, value);
        else throw ConfigError("unknown key '" + key + "'");
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::vector<ConfigSection> parse_config_text(const std::string& text)
{
    std::vector<ConfigSection> sections{{"", {}}};
    std::istringstream in(text);
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = strip(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError("malformed section header on line " + std::to_string(line_number));
            }
            sections.push_back({strip(line.substr(1, line.size() - 2)), {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected 'key = value' on line " + std::to_string(line_number));
        }
        sections.back().entries[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
    }
    return sections;
}

std::vector<ConfigSection> parse_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::vector<ExperimentConfig> resolve_configs(const std::vector<ConfigSection>& sections,
                                              const std::map<std::string, std::string>& overrides)
{
    ExperimentConfig defaults;
    if (!sections.empty() && sections.front().name.empty()) {
        for (const auto& [key, value] : sections.front().entries) apply_setting(defaults, key, value);
    }
    std::vector<ExperimentConfig> out;
    for (const auto& section : sections) {
        if (section.name.empty()) continue;
        ExperimentConfig config = defaults;
        config.name = section.name;
        for (const auto& [key, value] : section.entries) apply_setting(config, key, value);
        out.push_back(std::move(config));
    }
    if (out.empty()) out.push_back(defaults);
    const bool many = out.size() > 1;
    for (auto& config : out) {
        for (const auto& [key, value] : overrides) apply_setting(config, key, value);
        if (many) config.outdir /= config.name;
        config.validate();
    }
    return out;
}

std::vector<CellSummary> aggregate(const std::vector<RunRecord>& records)
{
    std::map<std::pair<Method, std::size_t>, std::vector<const RunRecord*>> groups;
    for (const auto& record : records) groups[{record.method, record.M}].push_back(&record);
    std::vector<CellSummary> cells;
    for (const auto& [key, members] : groups) {
        CellSummary cell;
        cell.method = key.first;
        cell.M = key.second;
        std::vector<double> errors, supports, iterations;
        for (const auto* record : members) {
            if (record->skipped) continue;
            errors.push_back(record->mse);
            supports.push_back(static_cast<double>(record->m0));
            iterations.push_back(static_cast<double>(record->iterations));
        }
        cell.runs = errors.size();
        cell.skipped = errors.empty();
        cell.mse_mean = mean_of(errors);
        cell.mse_std = sample_std(errors);
        cell.m0_mean = mean_of(supports);
        cell.m0_std = sample_std(supports);
        cell.iterations_mean = mean_of(iterations);
        cells.push_back(cell);
    }
    return cells;
}

ExperimentReport run_experiment(const ExperimentConfig& config)
{
    config.validate();
    const Source source(config);
    std::vector<RunOutput> outputs(config.runs);
    parallel_for(config.runs, config.jobs,
                 [&](std::size_t r) { outputs[r] = execute_run(config, source, config.seed + r); });

    ExperimentReport report;
    report.config = config;
    for (auto& output : outputs) {
        report.records.insert(report.records.end(), output.records.begin(), output.records.end());
        for (auto& trace : output.traces) report.traces.push_back(std::move(trace));
    }
    std::stable_sort(report.records.begin(), report.records.end(), record_order);
    report.cells = aggregate(report.records);
    return report;
}

std::string format_summary_csv(const std::vector<CellSummary>& cells)
{
    std::string out = "method,M,runs,mse_mean,mse_std,m0_mean,m0_std,iterations_mean,status\n";
    for (const auto& cell : cells) {
        out += std::string(to_string(cell.method)) + "," + std::to_string(cell.M) + ","
               + std::to_string(cell.runs) + "," + fmt(cell.mse_mean) + "," + fmt(cell.mse_std) + ","
               + fmt(cell.m0_mean) + "," + fmt(cell.m0_std) + "," + fmt(cell.iterations_mean) + ","
               + (cell.skipped ? "skipped" : "ok") + "\n";
    }
    return out;
}

std::string format_runs_csv(const std::vector<RunRecord>& records)
{
    std::string out = "seed,method,M,nu,lambda,mse,m0,iterations,stop_reason,wall_seconds,status\n";
    for (const auto& r : records) {
        out += std::to_string(r.seed) + "," + std::string(to_string(r.method)) + "," + std::to_string(r.M) + ","
               + fmt(r.nu) + "," + fmt(r.lambda) + "," + fmt(r.mse) + "," + std::to_string(r.m0) + ","
               + std::to_string(r.iterations) + "," + r.stop_reason + "," + fmt(r.wall_seconds) + ","
               + (r.skipped ? "skipped" : "ok") + "\n";
    }
    return out;
}

std::string format_trace_csv(const TrainTrace& trace)
{
    std::string out = "iteration,objective,m0,coordinate\n";
    char buf[64];
    for (std::size_t k = 0; k < trace.objective_history.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", trace.objective_history[k]);
        out += std::to_string(k) + "," + buf + "," + std::to_string(trace.m0_history[k]) + ",";
        if (k > 0) out += std::to_string(trace.chosen_coords[k - 1]);
        out += "\n";
    }
    return out;
}

std::string format_table(const ExperimentReport& report)
{
    const auto& config = report.config;
    std::ostringstream out;
    out << "dataset: " << config.dataset;
    if (config.dataset == "file") out << " (" << config.data_file.string() << ")";
    out << "  nu=" << fmt(config.nu) << "  lambda=" << fmt(config.lambda) << "  epsilon=" << fmt(config.epsilon)
        << "  runs=" << config.runs << "  seed=" << config.seed << "\n\n";
    const auto cell_for = [&](Method method, std::size_t M) -> const CellSummary* {
        for (const auto& cell : report.cells) {
            if (cell.method == method && (method == Method::krrn || cell.M == M)) return &cell;
        }
        return nullptr;
    };
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-8s", "M");
    out << buf;
    for (auto M : config.m_values) {
        std::snprintf(buf, sizeof buf, "%26zu", M);
        out << buf;
    }
    out << "\n";
    for (Method method : {Method::krrn, Method::krrm, Method::unif, Method::slkl}) {
        if (std::find(config.methods.begin(), config.methods.end(), method) == config.methods.end()) continue;
        std::snprintf(buf, sizeof buf, "%-8s", std::string(to_string(method)).c_str());
        out << buf;
        for (auto M : config.m_values) {
            const CellSummary* cell = cell_for(method, M);
            if (!cell || cell->skipped) {
                std::snprintf(buf, sizeof buf, "%26s", "skipped");
            } else {
                std::snprintf(buf, sizeof buf, "%14.6g +- %-9.2g", cell->mse_mean, cell->mse_std);
            }
            out << buf;
        }
        out << "\n";
    }
    if (std::find(config.methods.begin(), config.methods.end(), Method::slkl) != config.methods.end()) {
        std::snprintf(buf, sizeof buf, "%-8s", "m0");
        out << buf;
        for (auto M : config.m_values) {
            const CellSummary* cell = cell_for(Method::slkl, M);
            std::snprintf(buf, sizeof buf, "%26.1f", cell ? cell->m0_mean : 0.0);
            out << buf;
        }
        out << "\n";
    }
    return out.str();
}

void write_report(const ExperimentReport& report)
{
    const auto& outdir = report.config.outdir;
    std::filesystem::create_directories(outdir / "runs");
    write_file(outdir / "summary.csv", format_summary_csv(report.cells));
    write_file(outdir / "runs.csv", format_runs_csv(report.records));
    write_file(outdir / "report.txt", format_table(report));
    for (const auto& trace : report.traces) {
        const std::string name = std::string(to_string(trace.method)) + "_" + std::to_string(trace.M) + "_"
                                 + std::to_string(trace.seed) + ".csv";
        write_file(outdir / "runs" / name, format_trace_csv(trace.trace));
    }
}

std::vector<SweepCell> aggregate_sweep(const std::vector<RunRecord>& records)
{
    std::map<std::pair<double, std::size_t>, std::vector<double>> groups;
    for (const auto& record : records) groups[{record.nu, record.M}].push_back(static_cast<double>(record.m0));
    std::vector<SweepCell> cells;
    for (const auto& [key, values] : groups) {
        cells.push_back({key.first, key.second, values.size(), mean_of(values)});
    }
    return cells;
}

SweepReport sweep_m0(const ExperimentConfig& config, const std::vector<std::size_t>& m_grid,
                     const std::vector<double>& nu_grid)
{
    config.validate();
    if (m_grid.empty() || nu_grid.empty()) throw ConfigError("sweep grids must not be empty");
    const Source source(config);
    const KernelSpec spec = KernelSpec::gaussian(config.sigma2);
    std::vector<std::vector<RunRecord>> per_run(config.runs);
    parallel_for(config.runs, config.jobs, [&](std::size_t r) {
        const std::uint64_t seed = config.seed + r;
        const TrainTest data = source.draw(config, seed);
        for (const std::size_t M : m_grid) {
            if (M > data.train.size()) throw ConfigError("M = " + std::to_string(M) + " exceeds n_train");
            const ColumnSource columns(spec, data.train, sample_candidates(data.train.size(), M, seed),
                                       config.column_mode);
            for (const double nu : nu_grid) {
                const auto start = std::chrono::steady_clock::now();
                const TrainResult result = train_slkl(columns, data.train, train_config(config, M, nu, seed));
                RunRecord record;
                record.seed = seed;
                record.method = Method::slkl;
                record.M = M;
                record.nu = nu;
                record.lambda = config.lambda;
                record.mse = mse(predict(result.model, spec, data.test.features), data.test.targets);
                record.m0 = result.model.support_size();
                record.iterations = result.trace.iterations;
                record.stop_reason = std::string(to_string(result.trace.stop_reason));
                record.wall_seconds = seconds_since(start);
                per_run[r].push_back(record);
            }
        }
    });

    SweepReport report;
    for (auto& records : per_run) report.records.insert(report.records.end(), records.begin(), records.end());
    std::stable_sort(report.records.begin(), report.records.end(), record_order);
    report.cells = aggregate_sweep(report.records);

    const auto mean_at = [&](double nu, std::size_t M) {
        for (const auto& cell : report.cells) {
            if (cell.nu == nu && cell.M == M) return cell.m0_mean;
        }
        return 0.0;
    };
    std::vector<std::size_t> ms = m_grid;
    std::vector<double> nus = nu_grid;
    std::sort(ms.begin(), ms.end());
    std::sort(nus.begin(), nus.end());
    for (double nu : nus) {
        for (std::size_t i = 1; i < ms.size(); ++i) {
            if (mean_at(nu, ms[i]) < mean_at(nu, ms[i - 1])) {
                report.trend_notes.push_back("m0 decreases from M=" + std::to_string(ms[i - 1]) + " to M="
                                             + std::to_string(ms[i]) + " at nu=" + fmt(nu));
            }
        }
    }
    for (std::size_t M : ms) {
        for (std::size_t i = 1; i < nus.size(); ++i) {
            if (mean_at(nus[i], M) > mean_at(nus[i - 1], M)) {
                report.trend_notes.push_back("m0 increases from nu=" + fmt(nus[i - 1]) + " to nu=" + fmt(nus[i])
                                             + " at M=" + std::to_string(M));
            }
        }
    }
    return report;
}

void write_sweep(const SweepReport& report, const std::filesystem::path& outdir)
{
    std::filesystem::create_directories(outdir);
    std::string grid = "nu,M,runs,m0_mean\n";
    for (const auto& cell : report.cells) {
        grid += fmt(cell.nu) + "," + std::to_string(cell.M) + "," + std::to_string(cell.runs) + ","
                + fmt(cell.m0_mean) + "\n";
    }
    write_file(outdir / "m0_grid.csv", grid);
    std::string runs = "seed,nu,M,m0,iterations,mse,stop_reason\n";
    for (const auto& r : report.records) {
        runs += std::to_string(r.seed) + "," + fmt(r.nu) + "," + std::to_string(r.M) + "," + std::to_string(r.m0)
                + "," + std::to_string(r.iterations) + "," + fmt(r.mse) + "," + r.stop_reason + "\n";
    }
    write_file(outdir / "sweep_runs.csv", runs);
    std::string notes = report.trend_notes.empty() ? "m0 grows with M and shrinks with nu on this grid\n" : "";
    for (const auto& note : report.trend_notes) notes += note + "\n";
    write_file(outdir / "m0_trends.txt", notes);
}

} // namespace slkl::bench
