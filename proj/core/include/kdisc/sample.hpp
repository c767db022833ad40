#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kdisc {

/// n x d block of real observations, stored row-major. Every entry is finite.
class SampleMatrix {
public:
    SampleMatrix() = default;

    /// Takes ownership of `values` laid out row by row. Throws DataError on a
    /// size mismatch, an empty shape, or a non-finite entry.
    SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    /// Convenience for small literals: {{0, 1}, {2, 3}}.
    SampleMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static SampleMatrix from_rows(const std::vector<std::vector<double>>& rows);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool empty() const noexcept { return rows_ == 0; }

    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * cols_, cols_};
    }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
        return values_[i * cols_ + j];
    }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

    /// Rows of `top` followed by rows of `bottom`.
    static SampleMatrix vstack(const SampleMatrix& top, const SampleMatrix& bottom);
    /// Columns [first, first + count).
    [[nodiscard]] SampleMatrix columns(std::size_t first, std::size_t count) const;
    /// Every entry divided by `s` (bandwidth rescaling).
    [[nodiscard]] SampleMatrix divided_by(double s) const;

    friend bool operator==(const SampleMatrix&, const SampleMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// Dense row-major real matrix used for Gram and distance matrices.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * cols_ + j]; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * cols_, cols_};
    }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// Paired observations Z_i = (X_i, Y_i); both blocks have the same row count.
class PairedSample {
public:
    PairedSample(SampleMatrix x, SampleMatrix y);

    [[nodiscard]] const SampleMatrix& x() const noexcept { return x_; }
    [[nodiscard]] const SampleMatrix& y() const noexcept { return y_; }
    [[nodiscard]] std::size_t size() const noexcept { return x_.rows(); }

private:
    SampleMatrix x_;
    SampleMatrix y_;
};

}  // namespace kdisc
