#pragma once

#include <string>

#include "tessera/errors.hpp"

namespace tessera {

/// Half-open rectangle of pixel indices: rows [row_start, row_end), cols [col_start, col_end).
struct Region {
    int row_start = 0;
    int row_end = 0;
    int col_start = 0;
    int col_end = 0;

    int rows() const { return row_end - row_start; }
    int cols() const { return col_end - col_start; }

    bool operator==(const Region&) const = default;
};

inline std::string to_string(const Region& r) {
    return "(" + std::to_string(r.row_start) + ":" + std::to_string(r.row_end) + ", " +
           std::to_string(r.col_start) + ":" + std::to_string(r.col_end) + ")";
}

/// Throws ConfigError unless r is nonempty and inside an H x W canvas.
inline void require_region_in_canvas(const Region& r, int height, int width,
                                     const std::string& what) {
    if (r.row_start < 0 || r.row_start >= r.row_end || r.row_end > height)
        throw ConfigError(what + ".rows: [" + std::to_string(r.row_start) + ", " +
                          std::to_string(r.row_end) + ") invalid for canvas height " +
                          std::to_string(height));
    if (r.col_start < 0 || r.col_start >= r.col_end || r.col_end > width)
        throw ConfigError(what + ".cols: [" + std::to_string(r.col_start) + ", " +
                          std::to_string(r.col_end) + ") invalid for canvas width " +
                          std::to_string(width));
}

} // namespace tessera
