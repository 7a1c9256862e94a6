#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "peaksync/error.hpp"

namespace peaksync {

/// Row-major dense matrix of doubles. Rows are channels, columns are samples.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }

    std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// r channels of N samples each, plus the sample rate they were taken at.
///
/// The constructor enforces the invariants: unique non-empty labels, one
/// label per row, at least one channel and one sample, finite values and a
/// positive sample rate. A constructed record is never modified in place;
/// operations return new records.
class MultiChannelRecord {
public:
    MultiChannelRecord(std::vector<std::string> labels, Matrix samples, double sample_rate_hz)
        : labels_(std::move(labels)), samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
        validate();
    }

    std::size_t channel_count() const noexcept { return samples_.rows(); }
    std::size_t sample_count() const noexcept { return samples_.cols(); }
    double sample_rate_hz() const noexcept { return sample_rate_hz_; }

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const Matrix& samples() const noexcept { return samples_; }
    std::span<const double> channel(std::size_t k) const noexcept { return samples_.row(k); }

    /// Index of the channel with this label; throws ValidationError if absent.
    std::size_t index_of(const std::string& label) const {
        for (std::size_t k = 0; k < labels_.size(); ++k)
            if (labels_[k] == label) return k;
        throw ValidationError("unknown channel label '" + label + "'");
    }

    /// New record holding the named channels, in the order given.
    MultiChannelRecord select(std::span<const std::string> wanted) const {
        Matrix out(wanted.size(), sample_count());
        std::vector<std::string> names;
        names.reserve(wanted.size());
        for (std::size_t i = 0; i < wanted.size(); ++i) {
            const auto src = channel(index_of(wanted[i]));
            std::copy(src.begin(), src.end(), out.row(i).begin());
            names.push_back(wanted[i]);
        }
        return {std::move(names), std::move(out), sample_rate_hz_};
    }

    /// Same labels and rate, new sample values (shape must match).
    MultiChannelRecord with_samples(Matrix samples) const {
        detail::require(samples.rows() == samples_.rows() && samples.cols() == samples_.cols(),
                        "replacement samples must keep the record shape");
        return {labels_, std::move(samples), sample_rate_hz_};
    }

    friend bool operator==(const MultiChannelRecord&, const MultiChannelRecord&) = default;

private:
    void validate() const {
        detail::require(!labels_.empty() && samples_.rows() > 0, "record has zero channels");
        detail::require(samples_.cols() > 0, "record has zero samples");
        detail::require(labels_.size() == samples_.rows(), "label count does not match channel count");
        detail::require(std::isfinite(sample_rate_hz_) && sample_rate_hz_ > 0.0,
                        "sample rate must be positive");
        std::unordered_set<std::string> seen;
        for (const auto& label : labels_) {
            detail::require(!label.empty(), "channel labels must be non-empty");
            detail::require(seen.insert(label).second, "duplicate channel label '" + label + "'");
        }
        for (double v : samples_.data())
            detail::require(std::isfinite(v), "record contains a non-finite sample");
    }

    std::vector<std::string> labels_;
    Matrix samples_;
    double sample_rate_hz_;
};

}  // namespace peaksync
