#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cants/error.hpp"

namespace cants {

/// Dense row-major matrix of doubles; rows are time steps.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<const double> values() const { return data_; }

    /// Rows [first, first + count).
    Matrix slice_rows(std::size_t first, std::size_t count) const
    {
        if (first + count > rows_)
            throw domain_error("row slice out of range");
        Matrix out(count, cols_);
        std::copy(data_.begin() + static_cast<std::ptrdiff_t>(first * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((first + count) * cols_), out.data_.begin());
        return out;
    }

    /// Copy of the listed columns, in the listed order.
    Matrix select_cols(std::span<const std::size_t> cols) const
    {
        Matrix out(rows_, cols.size());
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t j = 0; j < cols.size(); ++j)
                out(r, j) = (*this)(r, cols[j]);
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace cants
