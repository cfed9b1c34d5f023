#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "slkl/kernel.hpp"

namespace slkl {

struct TrainTest {
    Dataset train;
    Dataset test;
};

/// sin(|x|) / |x|, with value 1 at the origin.
double sinc_target(std::span<const double> x);

/// Points uniform on [-5, 5]^2 with sinc targets. Train targets carry
/// zero-mean Gaussian noise whose variance is the mean squared clean train
/// target divided by 10^(snr_db / 10); test targets are clean. Train points,
/// test points and noise come from independent substreams of `seed`.
TrainTest gen_sinc(std::size_t n_train, std::size_t n_test, double snr_db, std::uint64_t seed);

/// Parse failure with its 1-based location in the source file.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t row, std::size_t column);
    std::size_t row() const { return row_; }
    std::size_t column() const { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

struct DelimitedOptions {
    /// 0-based column holding the target; may be negative to count from the end.
    long target_column = -1;
    /// ',' or any other single character; ' ' splits on runs of whitespace.
    char delimiter = ',';
    bool header = false;
    /// 0-based columns holding category labels; each is one-hot encoded
    /// (categories in sorted order) in place of the original column.
    std::vector<std::size_t> categorical_columns;
};

Dataset load_delimited(const std::filesystem::path& path, const DelimitedOptions& options);

struct SplitSpec {
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::uint64_t seed = 0;
};

/// Seeded shuffle, then the first n_train rows train and the next n_test test.
TrainTest split_dataset(const Dataset& data, const SplitSpec& split);

struct Standardized {
    Dataset train;
    std::vector<Dataset> others;
    Vector mean;
    Vector scale;
};

/// Per-feature affine map giving the train features zero mean and unit
/// (population) variance, applied unchanged to `others`. Constant features
/// are only centered.
Standardized standardize(const Dataset& train, std::span<const Dataset> others = {});

} // namespace slkl
