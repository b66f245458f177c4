#include "gridcodes/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace gridcodes {

const char* to_string(GridKind g) {
    switch (g) {
        case GridKind::Square: return "square";
        case GridKind::Triangular: return "triangular";
        case GridKind::King: return "king";
        case GridKind::ToroidalSquare: return "toroidal";
    }
    return "?";
}

const char* to_string(CodeKind k) {
    switch (k) {
        case CodeKind::D: return "d";
        case CodeKind::TD: return "td";
        case CodeKind::LD: return "ld";
        case CodeKind::LTD: return "ltd";
        case CodeKind::ID: return "id";
    }
    return "?";
}

void StripSpec::validate() const {
    if (height < 1) throw std::invalid_argument("strip height must be positive");
    if (grid == GridKind::ToroidalSquare && height < 3)
        throw std::invalid_argument("toroidal strips need height >= 3");
    if (circular) {
        if (!finite()) throw std::invalid_argument("circular strips have finite size");
        if (size < 3) throw std::invalid_argument("circular strips need size >= 3");
    } else if (finite() && size < 1) {
        throw std::invalid_argument("strip size must be positive");
    }
}

std::vector<std::pair<int, int>> neighbor_offsets(GridKind grid, int h, int row) {
    if (h < 1) throw std::invalid_argument("height must be positive");
    if (row < 0 || row >= h) throw std::invalid_argument("row out of range");
    if (grid == GridKind::ToroidalSquare && h < 3)
        throw std::invalid_argument("toroidal strips need height >= 3");

    std::vector<std::pair<int, int>> offs;
    auto keep = [&](int dr, int dc) {
        const int r = row + dr;
        if (r >= 0 && r < h) offs.emplace_back(dr, dc);
    };

    keep(0, -1);
    keep(0, 1);
    if (grid == GridKind::ToroidalSquare) {
        // Vertical neighbors modulo h; rows 0 and h-1 gain the wrap edge.
        const int up = (row + 1) % h;
        const int down = (row + h - 1) % h;
        offs.emplace_back(up - row, 0);
        if (down != up) offs.emplace_back(down - row, 0);
    } else {
        keep(-1, 0);
        keep(1, 0);
        if (grid == GridKind::Triangular || grid == GridKind::King) {
            keep(1, -1);
            keep(-1, 1);
        }
        if (grid == GridKind::King) {
            keep(1, 1);
            keep(-1, -1);
        }
    }

    std::sort(offs.begin(), offs.end());
    return offs;
}

StripGraph build_strip_graph(const StripSpec& spec) {
    spec.validate();
    if (!spec.finite()) throw std::invalid_argument("explicit graphs need a finite size");

    const int h = spec.height;
    const int s = spec.size;
    StripGraph g;
    g.spec = spec;
    g.adj.assign(static_cast<std::size_t>(h) * s, {});

    for (int col = 0; col < s; ++col) {
        for (int row = 0; row < h; ++row) {
            const int v = col * h + row;
            for (const auto& [dr, dc] : neighbor_offsets(spec.grid, h, row)) {
                int c2 = col + dc;
                if (spec.circular) {
                    c2 = ((c2 % s) + s) % s;
                } else if (c2 < 0 || c2 >= s) {
                    continue;
                }
                g.adj[v].push_back(c2 * h + (row + dr));
            }
            auto& nb = g.adj[v];
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        }
    }
    return g;
}

}  // namespace gridcodes
