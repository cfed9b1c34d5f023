#include "slkl/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "slkl/rng.hpp"

namespace slkl {

double sinc_target(std::span<const double> x)
{
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    if (r2 == 0.0) return 1.0;
    const double r = std::sqrt(r2);
    return std::sin(r) / r;
}

namespace {

Dataset sinc_points(std::size_t n, Rng& rng, const char* name)
{
    Dataset data;
    data.name = name;
    data.features.resize(static_cast<Eigen::Index>(n), 2);
    data.targets.resize(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
        data.features(i, 0) = rng.uniform(-5.0, 5.0);
        data.features(i, 1) = rng.uniform(-5.0, 5.0);
        data.targets[i] = sinc_target(data.point(static_cast<std::size_t>(i)));
    }
    return data;
}

} // namespace

TrainTest gen_sinc(std::size_t n_train, std::size_t n_test, double snr_db, std::uint64_t seed)
{
    if (n_train < 1) throw std::invalid_argument("gen_sinc: n_train must be positive");
    Rng train_rng = Rng::substream(seed, streams::sinc_train);
    Rng test_rng = Rng::substream(seed, streams::sinc_test);
    Rng noise_rng = Rng::substream(seed, streams::sinc_noise);

    TrainTest out{sinc_points(n_train, train_rng, "sinc-train"), sinc_points(n_test, test_rng, "sinc-test")};
    const double signal_power = out.train.targets.squaredNorm() / static_cast<double>(n_train);
    const double noise_std = std::sqrt(signal_power / std::pow(10.0, snr_db / 10.0));
    for (Eigen::Index i = 0; i < out.train.targets.size(); ++i) {
        out.train.targets[i] += noise_std * noise_rng.normal();
    }
    return out;
}

ParseError::ParseError(const std::string& message, std::size_t row, std::size_t column)
    : std::runtime_error(message + " (row " + std::to_string(row) + ", column " + std::to_string(column)
                         + ")"),
      row_(row), column_(column)
{
}

namespace {

std::string trim(std::string_view text)
{
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line, char delimiter)
{
    std::vector<std::string> fields;
    if (delimiter == ' ' || delimiter == '\t') {
        std::istringstream in(line);
        std::string field;
        while (in >> field) fields.push_back(field);
        return fields;
    }
    std::size_t start = 0;
    while (true) {
        const auto end = line.find(delimiter, start);
        fields.push_back(trim(std::string_view(line).substr(start, end - start)));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return fields;
}

bool parse_number(const std::string& text, double& value)
{
    if (text.empty()) return false;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    return ec == std::errc() && ptr == end && std::isfinite(value);
}

} // namespace

Dataset load_delimited(const std::filesystem::path& path, const DelimitedOptions& options)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open data file '" + path.string() + "'");

    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line_number == 1 && options.header) continue;
        if (trim(line).empty()) continue;
        auto fields = split_fields(line, options.delimiter);
        if (!rows.empty() && fields.size() != rows.front().size()) {
            throw ParseError("expected " + std::to_string(rows.front().size()) + " fields, found "
                                 + std::to_string(fields.size()),
                             line_number, fields.size());
        }
        rows.push_back(std::move(fields));
        line_numbers.push_back(line_number);
    }
    if (rows.empty()) throw std::runtime_error("data file '" + path.string() + "' has no rows");

    const std::size_t arity = rows.front().size();
    if (arity < 2) throw ParseError("need at least one feature and one target", line_numbers.front(), 1);
    const long signed_target =
        options.target_column < 0 ? static_cast<long>(arity) + options.target_column : options.target_column;
    if (signed_target < 0 || signed_target >= static_cast<long>(arity)) {
        throw std::invalid_argument("target column out of range");
    }
    const auto target = static_cast<std::size_t>(signed_target);
    const std::set<std::size_t> categorical(options.categorical_columns.begin(),
                                            options.categorical_columns.end());
    if (categorical.contains(target)) throw std::invalid_argument("target column cannot be categorical");

    std::map<std::size_t, std::vector<std::string>> levels;
    for (auto column : categorical) {
        if (column >= arity) throw std::invalid_argument("categorical column out of range");
        std::set<std::string> seen;
        for (const auto& row : rows) seen.insert(row[column]);
        levels[column].assign(seen.begin(), seen.end());
    }

    std::size_t width = 0;
    for (std::size_t j = 0; j < arity; ++j) {
        if (j == target) continue;
        width += categorical.contains(j) ? levels[j].size() : 1;
    }

    Dataset data;
    data.name = path.filename().string();
    data.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    data.targets.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        Eigen::Index out = 0;
        for (std::size_t j = 0; j < arity; ++j) {
            const std::string& cell = rows[i][j];
            if (categorical.contains(j)) {
                const auto& names = levels[j];
                const auto hit = std::find(names.begin(), names.end(), cell) - names.begin();
                for (std::size_t level = 0; level < names.size(); ++level) {
                    data.features(r, out++) = static_cast<std::size_t>(hit) == level ? 1.0 : 0.0;
                }
                continue;
            }
            double value = 0.0;
            if (!parse_number(cell, value)) {
                throw ParseError("non-numeric value '" + cell + "'", line_numbers[i], j + 1);
            }
            if (j == target) {
                data.targets[r] = value;
            } else {
                data.features(r, out++) = value;
            }
        }
    }
    return data;
}

TrainTest split_dataset(const Dataset& data, const SplitSpec& split)
{
    if (split.n_train < 1) throw std::invalid_argument("split: n_train must be positive");
    if (split.n_train + split.n_test > data.size()) {
        throw std::invalid_argument("split: n_train + n_test exceeds the dataset size");
    }
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng = Rng::substream(split.seed, streams::split);
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[static_cast<std::size_t>(rng.index(i))]);
    }
    const std::span<const std::size_t> all(order);
    TrainTest out{data.subset(all.first(split.n_train)),
                  data.subset(all.subspan(split.n_train, split.n_test))};
    out.train.name = data.name + "-train";
    out.test.name = data.name + "-test";
    return out;
}

Standardized standardize(const Dataset& train, std::span<const Dataset> others)
{
    train.validate();
    const auto n = static_cast<double>(train.size());
    Standardized out;
    out.mean = train.features.colwise().mean().transpose();
    out.scale = Vector::Ones(train.features.cols());
    for (Eigen::Index j = 0; j < train.features.cols(); ++j) {
        const double var = (train.features.col(j).array() - out.mean[j]).square().sum() / n;
        if (var > 0.0) out.scale[j] = std::sqrt(var);
    }
    const auto apply = [&](const Dataset& source) {
        if (source.features.cols() != train.features.cols()) {
            throw std::invalid_argument("standardize: feature count differs from train");
        }
        Dataset mapped = source;
        for (Eigen::Index j = 0; j < mapped.features.cols(); ++j) {
            mapped.features.col(j) = (mapped.features.col(j).array() - out.mean[j]) / out.scale[j];
        }
        return mapped;
    };
    out.train = apply(train);
    for (const auto& other : others) out.others.push_back(apply(other));
    return out;
}

} // namespace slkl
