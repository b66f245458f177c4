#ifndef GRIDCODES_LOCAL_PROPERTIES_HPP
#define GRIDCODES_LOCAL_PROPERTIES_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "gridcodes/grid.hpp"

namespace gridcodes {

// 0/1 labels of one column, bit r set <=> the vertex in row r is in the code.
struct ColumnLabeling {
    std::uint32_t bits = 0;
};

// Labels of `width` consecutive columns (4 = transfer-graph vertex,
// 5 = property-check window).
struct WindowLabeling {
    int width = 0;
    int height = 0;
    std::array<ColumnLabeling, 5> columns{};

    // Columns are packed little-endian: column c occupies bits [c*h, (c+1)*h).
    std::uint64_t packed() const {
        std::uint64_t v = 0;
        for (int c = 0; c < width; ++c)
            v |= static_cast<std::uint64_t>(columns[c].bits) << (c * height);
        return v;
    }

    static WindowLabeling from_packed(std::uint64_t bits, int width, int height) {
        WindowLabeling w;
        w.width = width;
        w.height = height;
        const std::uint32_t mask = (1u << height) - 1;
        for (int c = 0; c < width; ++c)
            w.columns[c].bits = static_cast<std::uint32_t>(bits >> (c * height)) & mask;
        return w;
    }
};

enum class BoundarySide { Begin, End };

// Precomputed window semantics for one (grid, height, width) triple.
// Cell (row, col) of a window maps to bit col*height + row of a packed
// labeling; masks hold each cell's neighborhood restricted to the window,
// the window being read as the non-circular strip G_{h,width}.
class WindowRule {
public:
    WindowRule(GridKind grid, int height, int width);

    int height() const { return height_; }
    int width() const { return width_; }
    int cells() const { return height_ * width_; }

    std::uint64_t closed_mask(int cell) const { return closed_[cell]; }
    std::uint64_t open_mask(int cell) const { return open_[cell]; }

    // The window property for `kind`: every vertex of the three middle
    // columns (width 5) is dominated inside the window, and the kind's
    // separation clause holds among those vertices. Width must be 5.
    bool window_ok(CodeKind kind, std::uint64_t code) const;

    // Same clauses applied to columns 0..2 (Begin) or 1..3 (End) of a
    // width-4 window. Width must be 4.
    bool boundary_ok(CodeKind kind, std::uint64_t code, BoundarySide side) const;

private:
    bool cells_ok(CodeKind kind, std::uint64_t code, int first_cell, int n_cells) const;

    GridKind grid_;
    int height_;
    int width_;
    std::vector<std::uint64_t> closed_;
    std::vector<std::uint64_t> open_;
};

// N[v] ∩ C_f (closed) or N(v) ∩ C_f (open) of a vertex inside a window,
// the window being read as a non-circular strip of its width.
std::vector<Vertex> trace(GridKind grid, const WindowLabeling& window, Vertex v, bool closed);

// Convenience single-shot forms of the two window predicates.
bool window_ok(CodeKind kind, GridKind grid, int h, const WindowLabeling& window);
bool boundary_ok(CodeKind kind, GridKind grid, int h, const WindowLabeling& window,
                 BoundarySide side);

}  // namespace gridcodes

#endif
