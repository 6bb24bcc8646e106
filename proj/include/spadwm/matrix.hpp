#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spadwm/errors.hpp"

namespace spadwm {

/// Dense row-major matrix with value semantics.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    T& at(std::size_t r, std::size_t c) {
        if (r >= rows_ || c >= cols_) throw IndexError("matrix index out of range");
        return (*this)(r, c);
    }
    const T& at(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_) throw IndexError("matrix index out of range");
        return (*this)(r, c);
    }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    bool same_shape(const Matrix& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

/// Binary matrix; every entry is 0 or 1.
using BitMatrix = Matrix<std::uint8_t>;

/// Flat bit string, one byte per bit (0 or 1).
using BitString = std::vector<std::uint8_t>;

}  // namespace spadwm
