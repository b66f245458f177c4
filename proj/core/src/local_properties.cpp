#include "gridcodes/local_properties.hpp"

#include <stdexcept>

namespace gridcodes {

WindowRule::WindowRule(GridKind grid, int height, int width)
    : grid_(grid), height_(height), width_(width) {
    if (height < 1 || height * width > 60)
        throw std::invalid_argument("window does not fit the packed representation");
    closed_.assign(static_cast<std::size_t>(cells()), 0);
    open_.assign(static_cast<std::size_t>(cells()), 0);
    for (int col = 0; col < width; ++col) {
        for (int row = 0; row < height; ++row) {
            const int cell = col * height + row;
            std::uint64_t open = 0;
            for (const auto& [dr, dc] : neighbor_offsets(grid, height, row)) {
                const int c2 = col + dc;
                if (c2 < 0 || c2 >= width) continue;
                open |= 1ull << (c2 * height + (row + dr));
            }
            open_[cell] = open;
            closed_[cell] = open | (1ull << cell);
        }
    }
}

bool WindowRule::cells_ok(CodeKind kind, std::uint64_t code, int first_cell, int n_cells) const {
    const bool open_dom = uses_open_domination(kind);
    for (int i = first_cell; i < first_cell + n_cells; ++i) {
        if (((open_dom ? open_[i] : closed_[i]) & code) == 0) return false;
    }
    if (kind == CodeKind::ID) {
        for (int i = first_cell; i < first_cell + n_cells; ++i) {
            const std::uint64_t ti = closed_[i] & code;
            for (int j = i + 1; j < first_cell + n_cells; ++j) {
                if (ti == (closed_[j] & code)) return false;
            }
        }
    } else if (kind == CodeKind::LD || kind == CodeKind::LTD) {
        for (int i = first_cell; i < first_cell + n_cells; ++i) {
            if ((code >> i) & 1) continue;
            const std::uint64_t ti = closed_[i] & code;
            for (int j = i + 1; j < first_cell + n_cells; ++j) {
                if ((code >> j) & 1) continue;
                if (ti == (closed_[j] & code)) return false;
            }
        }
    }
    return true;
}

bool WindowRule::window_ok(CodeKind kind, std::uint64_t code) const {
    if (width_ != 5) throw std::invalid_argument("window_ok needs a width-5 window");
    return cells_ok(kind, code, height_, 3 * height_);
}

bool WindowRule::boundary_ok(CodeKind kind, std::uint64_t code, BoundarySide side) const {
    if (width_ != 4) throw std::invalid_argument("boundary_ok needs a width-4 window");
    return cells_ok(kind, code, side == BoundarySide::Begin ? 0 : height_, 3 * height_);
}

std::vector<Vertex> trace(GridKind grid, const WindowLabeling& window, Vertex v, bool closed) {
    if (v.row < 0 || v.row >= window.height || v.col < 0 || v.col >= window.width)
        throw std::invalid_argument("vertex outside the window");
    const WindowRule rule(grid, window.height, window.width);
    const int cell = v.col * window.height + v.row;
    std::uint64_t hits = (closed ? rule.closed_mask(cell) : rule.open_mask(cell)) & window.packed();
    std::vector<Vertex> out;
    while (hits) {
        const int b = __builtin_ctzll(hits);
        hits &= hits - 1;
        out.push_back({b % window.height, b / window.height});
    }
    return out;
}

bool window_ok(CodeKind kind, GridKind grid, int h, const WindowLabeling& window) {
    if (window.width != 5 || window.height != h)
        throw std::invalid_argument("window_ok needs a width-5 window of the stated height");
    return WindowRule(grid, h, 5).window_ok(kind, window.packed());
}

bool boundary_ok(CodeKind kind, GridKind grid, int h, const WindowLabeling& window,
                 BoundarySide side) {
    if (window.width != 4 || window.height != h)
        throw std::invalid_argument("boundary_ok needs a width-4 window of the stated height");
    return WindowRule(grid, h, 4).boundary_ok(kind, window.packed(), side);
}

}  // namespace gridcodes
