#ifndef GRIDCODES_PATTERN_HPP
#define GRIDCODES_PATTERN_HPP

#include <iosfwd>
#include <vector>

#include "gridcodes/aux_graph.hpp"
#include "gridcodes/minplus.hpp"
#include "gridcodes/rational.hpp"

namespace gridcodes {

// One period of a horizontally periodic code: repeating `cells` infinitely
// along the columns yields a valid code of density `density` = ones/(h·k).
struct PatternGrid {
    int height = 0;
    int period = 0;
    std::vector<std::uint8_t> cells;  // column-major, cells[col * height + row]
    Rational density;

    bool at(int row, int col) const { return cells[col * height + row] != 0; }
};

// An elementary circuit of mean exactly `lambda`, as a vertex index
// sequence (arcs i -> i+1, wrapping). Deterministic: starts at the smallest
// vertex lying on a minimum-mean circuit and among the shortest circuits
// through it follows smallest successors. Throws std::logic_error if no
// circuit of that mean exists.
std::vector<int> extract_min_mean_cycle(const AuxGraph& g, const Rational& lambda);

// Reads the pattern off one traversal: each arc contributes the last column
// of its target. The pattern has one column per arc.
PatternGrid cycle_to_pattern(const AuxGraph& g, const std::vector<int>& cycle);

// True iff tiling the pattern around a circular strip of size r·period
// (r >= 3 periods, at least 5 columns) yields a valid kind-code per the
// oracle module and the recomputed density equals p.density exactly.
bool verify_pattern(const PatternGrid& p, CodeKind kind, GridKind grid);

// `# kind grid h period density=a/b`, then one line per row, 'X' = in code.
void render_pattern(const PatternGrid& p, CodeKind kind, GridKind grid, std::ostream& out);

}  // namespace gridcodes

#endif
