#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fundusquant/error.hpp"

namespace fundusquant {

struct Pixel {
    int x = 0;
    int y = 0;
    bool operator==(const Pixel&) const = default;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point&) const = default;
};

/// Row-major raster with strictly positive dimensions.
template <typename T>
class Grid {
public:
    Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
        if (width <= 0 || height <= 0) {
            throw Error(ErrorCode::ShapeMismatch, "raster dimensions must be positive");
        }
        data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }

    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
    const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

    /// Out-of-frame reads return `outside`.
    T at_or(int x, int y, T outside) const noexcept { return contains(x, y) ? (*this)(x, y) : outside; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    bool same_shape(const Grid& o) const noexcept { return width_ == o.width_ && height_ == o.height_; }
    template <typename U>
    bool same_shape(const Grid<U>& o) const noexcept {
        return width_ == o.width() && height_ == o.height();
    }

    bool operator==(const Grid&) const = default;

private:
    int width_;
    int height_;
    std::vector<T> data_;
};

using RealRaster = Grid<double>;

/// Boolean raster stored one byte per pixel (0 or 1).
class BinaryMask : public Grid<std::uint8_t> {
public:
    BinaryMask(int width, int height) : Grid<std::uint8_t>(width, height, 0) {}

    bool test(int x, int y) const noexcept { return contains(x, y) && (*this)(x, y) != 0; }
    void set(int x, int y, bool on = true) noexcept { (*this)(x, y) = on ? 1 : 0; }

    std::size_t count() const noexcept;
    bool empty() const noexcept;
    std::vector<Pixel> pixels() const;

    BinaryMask operator&(const BinaryMask& o) const;
    BinaryMask operator|(const BinaryMask& o) const;
    BinaryMask operator~() const;
    /// True when every foreground pixel of *this is foreground in `o`.
    bool subset_of(const BinaryMask& o) const;

    BinaryMask mirrored_horizontally() const;
    /// Clockwise quarter turn; output is height x width.
    BinaryMask rotated_90() const;
};

/// Per-pixel class ids; 0 is background.
class LabelMap : public Grid<std::uint8_t> {
public:
    LabelMap(int width, int height) : Grid<std::uint8_t>(width, height, 0) {}
    BinaryMask select(std::uint8_t id) const;
};

/// Confidences in [0, 1].
class ProbMap : public Grid<double> {
public:
    ProbMap(int width, int height, double fill = 0.0) : Grid<double>(width, height, fill) {}
    /// Throws DecodeError when any value lies outside [0, 1].
    void validate() const;
};

void require_same_shape(const BinaryMask& a, const BinaryMask& b);

}  // namespace fundusquant
