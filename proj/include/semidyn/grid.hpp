#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "semidyn/errors.hpp"

namespace semidyn::dyn {

using cplx = std::complex<double>;

// Rectangle of the complex plane sampled at fixed resolution. Row-major,
// top row carries the maximum imaginary part.
struct GridSpec {
    cplx center{};
    double width = 0, height = 0;
    int cols = 0, rows = 0;

    static constexpr std::int64_t kPixelCap = std::int64_t{1} << 24;

    void validate() const;
    std::int64_t pixel_count() const { return std::int64_t{cols} * rows; }

    cplx point_at(int row, int col) const {
        return center + cplx{((col + 0.5) / cols - 0.5) * width,
                             (0.5 - (row + 0.5) / rows) * height};
    }

    // Inverse of point_at; false when the point is outside the window.
    bool pixel_of(cplx z, int& row, int& col) const;

    bool operator==(const GridSpec&) const = default;
};

struct Mask {
    enum class Tag { IApprox, JApprox, FApprox, Custom };

    GridSpec grid;
    std::vector<std::uint8_t> bits;  // rows*cols, row-major, 0/1
    Tag tag = Tag::Custom;

    Mask() = default;
    Mask(GridSpec g, Tag t) : grid(g), bits(static_cast<std::size_t>(g.pixel_count()), 0), tag(t) {}

    std::uint8_t& at(int row, int col) { return bits[static_cast<std::size_t>(row) * grid.cols + col]; }
    std::uint8_t at(int row, int col) const { return bits[static_cast<std::size_t>(row) * grid.cols + col]; }
    std::int64_t count() const;
};

// Binary PGM, P5, maxval 255, set=255 / unset=0. Bit-exact.
void write_pgm(const Mask& mask, const std::string& path);
Mask read_pgm(const std::string& path);

}  // namespace semidyn::dyn
