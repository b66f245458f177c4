#ifndef GRIDCODES_ORACLE_HPP
#define GRIDCODES_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "gridcodes/grid.hpp"

namespace gridcodes {

// A code given extensionally on a finite strip.
struct ExplicitCode {
    StripSpec strip;
    std::vector<Vertex> members;
};

// Definition-level check of the code property on the explicit strip graph.
// Deliberately the most literal implementation possible: it is the ground
// truth the window machinery is tested against.
bool is_code(const ExplicitCode& code, CodeKind kind);
bool is_code(const StripGraph& graph, const std::vector<bool>& in_code, CodeKind kind);

struct OracleAnswer {
    bool feasible = false;
    long value = 0;                 // minimum cardinality when feasible
    std::vector<Vertex> witness;    // one optimal code when feasible
};

// Exact minimum by exhaustive search in increasing cardinality. Infeasible
// iff the full vertex set itself fails (adding vertices never breaks
// domination or separation). Throws ResourceError above `cap_vertices`.
OracleAnswer brute_min(const StripSpec& strip, CodeKind kind, int cap_vertices = 20);

}  // namespace gridcodes

#endif
