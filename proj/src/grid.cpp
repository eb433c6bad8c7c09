#include "semidyn/grid.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace semidyn::dyn {

void GridSpec::validate() const {
    if (cols < 1 || rows < 1) throw Error("grid must have positive dimensions");
    if (!(width > 0) || !(height > 0)) throw Error("grid width/height must be positive");
    if (pixel_count() > kPixelCap)
        throw ResourceCapError("grid " + std::to_string(cols) + "x" + std::to_string(rows) +
                               " exceeds the pixel cap");
}

bool GridSpec::pixel_of(cplx z, int& row, int& col) const {
    double x = (z.real() - center.real()) / width + 0.5;
    double y = 0.5 - (z.imag() - center.imag()) / height;
    if (!(x >= 0.0) || !(x < 1.0) || !(y >= 0.0) || !(y < 1.0)) return false;
    col = static_cast<int>(x * cols);
    row = static_cast<int>(y * rows);
    if (col >= cols) col = cols - 1;
    if (row >= rows) row = rows - 1;
    return true;
}

std::int64_t Mask::count() const {
    return std::accumulate(bits.begin(), bits.end(), std::int64_t{0});
}

void write_pgm(const Mask& mask, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "P5\n" << mask.grid.cols << " " << mask.grid.rows << "\n255\n";
    std::vector<std::uint8_t> row(static_cast<std::size_t>(mask.grid.cols));
    for (int i = 0; i < mask.grid.rows; ++i) {
        for (int j = 0; j < mask.grid.cols; ++j)
            row[static_cast<std::size_t>(j)] = mask.at(i, j) ? 255 : 0;
        out.write(reinterpret_cast<const char*>(row.data()), mask.grid.cols);
    }
    if (!out) throw Error("failed writing " + path);
}

Mask read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::string magic;
    int cols = 0, rows = 0, maxval = 0;
    in >> magic >> cols >> rows >> maxval;
    if (magic != "P5" || maxval != 255) throw Error(path + ": not a P5/255 PGM");
    in.get();  // single whitespace after header
    GridSpec g;
    g.cols = cols;
    g.rows = rows;
    g.width = g.height = 1.0;  // geometry is not stored in PGM
    Mask m(g, Mask::Tag::Custom);
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(cols) * rows);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in) throw Error(path + ": truncated PGM");
    for (std::size_t k = 0; k < raw.size(); ++k) m.bits[k] = raw[k] ? 1 : 0;
    return m;
}

}  // namespace semidyn::dyn
