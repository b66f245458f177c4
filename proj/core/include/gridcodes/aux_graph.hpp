#ifndef GRIDCODES_AUX_GRAPH_HPP
#define GRIDCODES_AUX_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gridcodes/grid.hpp"
#include "gridcodes/local_properties.hpp"

namespace gridcodes {

// Directed transfer graph over width-4 window labelings. An arc (u, v)
// exists iff u's last three columns equal v's first three and the width-5
// concatenation u ▷ v satisfies the window property; its length is the
// number of 1-labels in v's last column.
//
// Vertices are kept in ascending packed-labeling order, which makes every
// derived matrix, hash and certificate reproducible. Arcs are stored as a
// bitmask over the new column t: the target of (u, t) is
// (packed(u) >> h) | (t << 3h). Out-degree is therefore at most 2^h.
struct AuxGraph {
    CodeKind kind;
    GridKind grid;
    int height = 1;

    std::vector<std::uint32_t> labels;    // packed width-4 labelings, ascending
    std::vector<std::uint32_t> succ;      // per vertex: bit t set <=> arc via new column t
    std::vector<std::int32_t> index_of;   // size 2^{4h}: packed -> vertex index or -1

    int vertex_count() const { return static_cast<int>(labels.size()); }
    int raw_vertex_count() const { return static_cast<int>(index_of.size()); }

    std::uint32_t target_label(int u, std::uint32_t t) const {
        return (labels[u] >> height) | (t << (3 * height));
    }
    static int arc_length(std::uint32_t t) { return __builtin_popcount(t); }

    long arc_count() const;
};

// u ▷ v: the width-5 labeling equal to u on columns 0..3 and to v on
// columns 1..4. Throws std::invalid_argument if the overlap disagrees.
WindowLabeling concat(const WindowLabeling& u, const WindowLabeling& v);

// Builds the full graph on all 2^{4h} labelings. Throws ResourceError when
// the vertex tables would exceed `memory_cap_bytes`.
AuxGraph build_aux_graph(CodeKind kind, GridKind grid, int h,
                         std::uint64_t memory_cap_bytes = 2ull << 30);

// Iteratively removes vertices with no outgoing or no incoming arc until a
// fixpoint. Every circuit survives. May return an empty graph.
AuxGraph trim(const AuxGraph& g);

// Keeps exactly the vertices lying on some begin->...->end path: vertices
// reachable from a begin-boundary vertex and co-reachable from an
// end-boundary vertex (both boundary sets included). Used for the
// source/sink route, where path-only vertices must not be discarded.
AuxGraph trim_for_paths(const AuxGraph& g);

// g plus a source and a sink. The source has an arc to every vertex whose
// labeling satisfies the begin-boundary property, weighted by the number of
// 1-labels in all four columns; every vertex satisfying the end-boundary
// property has a zero-length arc to the sink.
struct AugmentedGraph {
    AuxGraph base;
    std::vector<std::int32_t> source_arc_length;  // per vertex, -1 = no arc
    std::vector<bool> sink_arc;                   // per vertex

    int source_index() const { return base.vertex_count(); }
    int sink_index() const { return base.vertex_count() + 1; }
};

AugmentedGraph augment(const AuxGraph& g);

// Line-based debug dump: one `index<TAB>hex-packed-labeling` line per
// vertex, then one `u<TAB>v<TAB>length` line per finite arc.
void export_graph(const AuxGraph& g, std::ostream& out);

}  // namespace gridcodes

#endif
