#include "kdisc/sample.hpp"

#include <cmath>
#include <string>

#include "kdisc/errors.hpp"

namespace kdisc {

SampleMatrix::SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (rows_ == 0 || cols_ == 0) {
        throw DataError("sample matrix must have at least one row and one column");
    }
    if (values_.size() != rows_ * cols_) {
        throw DataError("sample matrix storage does not match " + std::to_string(rows_) + "x" +
                        std::to_string(cols_));
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            throw DataError("non-finite sample value at row " + std::to_string(k / cols_ + 1) +
                            ", column " + std::to_string(k % cols_ + 1));
        }
    }
}

SampleMatrix::SampleMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<std::vector<double>> copy;
    copy.reserve(rows.size());
    for (const auto& r : rows) copy.emplace_back(r);
    *this = from_rows(copy);
}

SampleMatrix SampleMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DataError("sample matrix must have at least one row");
    const std::size_t d = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != d) {
            throw DataError("ragged sample rows: row " + std::to_string(i + 1) + " has " +
                            std::to_string(rows[i].size()) + " values, expected " + std::to_string(d));
        }
        flat.insert(flat.end(), rows[i].begin(), rows[i].end());
    }
    return SampleMatrix(rows.size(), d, std::move(flat));
}

SampleMatrix SampleMatrix::vstack(const SampleMatrix& top, const SampleMatrix& bottom) {
    if (top.cols() != bottom.cols()) {
        throw DataError("cannot stack samples of dimension " + std::to_string(top.cols()) + " and " +
                        std::to_string(bottom.cols()));
    }
    std::vector<double> flat(top.values_.begin(), top.values_.end());
    flat.insert(flat.end(), bottom.values_.begin(), bottom.values_.end());
    return SampleMatrix(top.rows() + bottom.rows(), top.cols(), std::move(flat));
}

SampleMatrix SampleMatrix::columns(std::size_t first, std::size_t count) const {
    if (count == 0 || first + count > cols_) {
        throw DataError("column range [" + std::to_string(first) + ", " + std::to_string(first + count) +
                        ") outside a " + std::to_string(cols_) + "-column sample");
    }
    std::vector<double> flat;
    flat.reserve(rows_ * count);
    for (std::size_t i = 0; i < rows_; ++i) {
        auto r = row(i);
        flat.insert(flat.end(), r.begin() + static_cast<std::ptrdiff_t>(first),
                    r.begin() + static_cast<std::ptrdiff_t>(first + count));
    }
    return SampleMatrix(rows_, count, std::move(flat));
}

SampleMatrix SampleMatrix::divided_by(double s) const {
    std::vector<double> flat(values_);
    for (double& v : flat) v /= s;
    return SampleMatrix(rows_, cols_, std::move(flat));
}

PairedSample::PairedSample(SampleMatrix x, SampleMatrix y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.rows() != y_.rows()) {
        throw DataError("paired sample needs equal row counts, got " + std::to_string(x_.rows()) + " and " +
                        std::to_string(y_.rows()));
    }
}

}  // namespace kdisc
