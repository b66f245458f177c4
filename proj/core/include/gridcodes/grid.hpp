#ifndef GRIDCODES_GRID_HPP
#define GRIDCODES_GRID_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace gridcodes {

// The four strip topologies. ToroidalSquare is the square grid with rows
// wrapped (rows 0 and h-1 adjacent columnwise); it requires height >= 3.
enum class GridKind { Square, Triangular, King, ToroidalSquare };

// The five code notions, ordered so that the implication ladder reads
// naturally: every ID-code is an LD-code; every LTD-code is an LD- and a
// TD-code; every LD- or TD-code is a D-code.
enum class CodeKind { D, TD, LD, LTD, ID };

const char* to_string(GridKind g);
const char* to_string(CodeKind k);

// True for the kinds whose domination clause uses the open neighborhood
// N(v) instead of the closed neighborhood N[v].
inline bool uses_open_domination(CodeKind k) {
    return k == CodeKind::TD || k == CodeKind::LTD;
}

// True for the kinds that carry a separation clause at all.
inline bool has_separation(CodeKind k) {
    return k == CodeKind::LD || k == CodeKind::LTD || k == CodeKind::ID;
}

// A strip of a grid: `height` rows, `size` columns (kInfiniteSize for the
// infinite strip), optionally wrapped around columnwise.
struct StripSpec {
    static constexpr int kInfiniteSize = -1;

    GridKind grid;
    int height = 1;
    int size = kInfiniteSize;
    bool circular = false;

    bool finite() const { return size != kInfiniteSize; }

    // Throws std::invalid_argument on violated invariants:
    // height >= 1; toroidal => height >= 3; circular => finite size >= 3.
    void validate() const;
};

// 0-based position inside a strip. Columns are taken modulo size when the
// strip is circular.
struct Vertex {
    int row = 0;
    int col = 0;
    bool operator==(const Vertex&) const = default;
    bool operator<(const Vertex& o) const {
        return col != o.col ? col < o.col : row < o.row;
    }
};

// Open-neighborhood offsets (drow, dcol) of a vertex in row `row` of an
// infinite strip of height h. Offsets that would leave [0, h) are dropped;
// for ToroidalSquare the vertical offsets are returned already wrapped, so
// row + drow is always a valid row.
std::vector<std::pair<int, int>> neighbor_offsets(GridKind grid, int h, int row);

// Explicit finite strip graph. Vertices are indexed column-major:
// index = col * height + row.
struct StripGraph {
    StripSpec spec;
    std::vector<std::vector<int>> adj;  // sorted neighbor lists

    int vertex_count() const { return static_cast<int>(adj.size()); }
    int index_of(Vertex v) const { return v.col * spec.height + v.row; }
    Vertex vertex_at(int idx) const { return {idx % spec.height, idx / spec.height}; }
};

// Materializes the strip as an explicit graph. The edge set is exactly
// neighbor_offsets applied to every vertex, with column arithmetic modulo
// size when circular and out-of-range columns dropped otherwise.
StripGraph build_strip_graph(const StripSpec& spec);

}  // namespace gridcodes

#endif
