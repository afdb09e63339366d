#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace neuropt {

using Vector = std::vector<double>;

/// Dense row-major matrix. Boolean payloads use `std::uint8_t` cells so rows
/// can be handed out as spans.
template <typename T>
class Matrix
{
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    void fill(const T& value) { std::fill(data_.begin(), data_.end(), value); }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using BoolMatrix = Matrix<std::uint8_t>;
using RealMatrix = Matrix<double>;

/// Dense rank-3 tensor indexed (a, b, c), last index fastest.
template <typename T>
class Tensor3
{
public:
    Tensor3() = default;
    Tensor3(std::size_t n0, std::size_t n1, std::size_t n2, T fill = T{})
        : n0_(n0), n1_(n1), n2_(n2), data_(n0 * n1 * n2, fill)
    {}

    std::size_t extent(std::size_t axis) const
    {
        switch (axis) {
        case 0: return n0_;
        case 1: return n1_;
        case 2: return n2_;
        default: throw std::out_of_range("Tensor3 has three axes");
        }
    }

    T& operator()(std::size_t a, std::size_t b, std::size_t c) { return data_[(a * n1_ + b) * n2_ + c]; }
    const T& operator()(std::size_t a, std::size_t b, std::size_t c) const
    {
        return data_[(a * n1_ + b) * n2_ + c];
    }

    bool operator==(const Tensor3&) const = default;

private:
    std::size_t n0_ = 0;
    std::size_t n1_ = 0;
    std::size_t n2_ = 0;
    std::vector<T> data_;
};

inline void require_shape(std::size_t got_rows, std::size_t got_cols, std::size_t rows, std::size_t cols,
                          const char* what)
{
    if (got_rows != rows || got_cols != cols) {
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(rows) + "x" +
                                    std::to_string(cols) + ", got " + std::to_string(got_rows) + "x" +
                                    std::to_string(got_cols));
    }
}

} // namespace neuropt
