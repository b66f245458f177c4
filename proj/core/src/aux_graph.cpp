#include "gridcodes/aux_graph.hpp"

#include <deque>
#include <ostream>
#include <stdexcept>

#include "gridcodes/errors.hpp"

namespace gridcodes {

long AuxGraph::arc_count() const {
    long arcs = 0;
    for (std::uint32_t m : succ) arcs += __builtin_popcount(m);
    return arcs;
}

WindowLabeling concat(const WindowLabeling& u, const WindowLabeling& v) {
    if (u.width != 4 || v.width != 4 || u.height != v.height)
        throw std::invalid_argument("concat needs two width-4 windows of equal height");
    for (int c = 0; c < 3; ++c) {
        if (u.columns[c + 1].bits != v.columns[c].bits)
            throw std::invalid_argument("concat: overlapping columns disagree");
    }
    WindowLabeling w;
    w.width = 5;
    w.height = u.height;
    for (int c = 0; c < 4; ++c) w.columns[c] = u.columns[c];
    w.columns[4] = v.columns[3];
    return w;
}

AuxGraph build_aux_graph(CodeKind kind, GridKind grid, int h, std::uint64_t memory_cap_bytes) {
    if (h < 1) throw std::invalid_argument("height must be positive");
    if (grid == GridKind::ToroidalSquare && h < 3)
        throw std::invalid_argument("toroidal strips need height >= 3");
    if (4 * h > 28) throw ResourceError("height too large for packed 4-column labelings");

    const std::uint64_t raw = 1ull << (4 * h);
    const std::uint64_t bytes = raw * (sizeof(std::uint32_t) * 2 + sizeof(std::int32_t));
    if (bytes > memory_cap_bytes)
        throw ResourceError("auxiliary graph needs " + std::to_string(bytes) +
                            " bytes, over the cap of " + std::to_string(memory_cap_bytes));

    AuxGraph g;
    g.kind = kind;
    g.grid = grid;
    g.height = h;
    g.labels.resize(raw);
    g.succ.assign(raw, 0);
    g.index_of.resize(raw);

    const WindowRule rule(grid, h, 5);
    const std::uint32_t t_count = 1u << h;
    for (std::uint64_t u = 0; u < raw; ++u) {
        g.labels[u] = static_cast<std::uint32_t>(u);
        g.index_of[u] = static_cast<std::int32_t>(u);
        std::uint32_t mask = 0;
        for (std::uint32_t t = 0; t < t_count; ++t) {
            const std::uint64_t window = u | (static_cast<std::uint64_t>(t) << (4 * h));
            if (rule.window_ok(kind, window)) mask |= 1u << t;
        }
        g.succ[u] = mask;
    }
    return g;
}

namespace {

// Rebuilds the index and filters arcs after a keep/drop decision per vertex.
AuxGraph filter_vertices(const AuxGraph& g, const std::vector<bool>& keep) {
    AuxGraph out;
    out.kind = g.kind;
    out.grid = g.grid;
    out.height = g.height;
    out.index_of.assign(g.index_of.size(), -1);

    for (int u = 0; u < g.vertex_count(); ++u) {
        if (!keep[u]) continue;
        out.index_of[g.labels[u]] = static_cast<std::int32_t>(out.labels.size());
        out.labels.push_back(g.labels[u]);
    }
    out.succ.reserve(out.labels.size());
    for (int u = 0; u < g.vertex_count(); ++u) {
        if (!keep[u]) continue;
        std::uint32_t mask = 0;
        std::uint32_t m = g.succ[u];
        while (m) {
            const std::uint32_t t = static_cast<std::uint32_t>(__builtin_ctz(m));
            m &= m - 1;
            if (out.index_of[g.target_label(u, t)] >= 0) mask |= 1u << t;
        }
        out.succ.push_back(mask);
    }
    return out;
}

}  // namespace

AuxGraph trim(const AuxGraph& g) {
    const int n = g.vertex_count();
    std::vector<int> outdeg(n, 0), indeg(n, 0);
    std::vector<std::vector<int>> preds(n);

    for (int u = 0; u < n; ++u) {
        std::uint32_t m = g.succ[u];
        while (m) {
            const std::uint32_t t = static_cast<std::uint32_t>(__builtin_ctz(m));
            m &= m - 1;
            const std::int32_t v = g.index_of[g.target_label(u, t)];
            if (v < 0) continue;
            ++outdeg[u];
            ++indeg[v];
            preds[v].push_back(u);
        }
    }

    std::vector<bool> alive(n, true);
    std::deque<int> dead;
    for (int u = 0; u < n; ++u)
        if (outdeg[u] == 0 || indeg[u] == 0) { alive[u] = false; dead.push_back(u); }

    while (!dead.empty()) {
        const int u = dead.front();
        dead.pop_front();
        std::uint32_t m = g.succ[u];
        while (m) {
            const std::uint32_t t = static_cast<std::uint32_t>(__builtin_ctz(m));
            m &= m - 1;
            const std::int32_t v = g.index_of[g.target_label(u, t)];
            if (v < 0 || !alive[v]) continue;
            if (--indeg[v] == 0) { alive[v] = false; dead.push_back(v); }
        }
        for (int p : preds[u]) {
            if (!alive[p]) continue;
            if (--outdeg[p] == 0) { alive[p] = false; dead.push_back(p); }
        }
    }
    return filter_vertices(g, alive);
}

AuxGraph trim_for_paths(const AuxGraph& g) {
    const int n = g.vertex_count();
    const WindowRule rule(g.grid, g.height, 4);

    std::vector<bool> forward(n, false), backward(n, false);
    std::deque<int> queue;
    std::vector<std::vector<int>> preds(n);

    for (int u = 0; u < n; ++u) {
        std::uint32_t m = g.succ[u];
        while (m) {
            const std::uint32_t t = static_cast<std::uint32_t>(__builtin_ctz(m));
            m &= m - 1;
            const std::int32_t v = g.index_of[g.target_label(u, t)];
            if (v >= 0) preds[v].push_back(u);
        }
    }

    for (int u = 0; u < n; ++u) {
        if (rule.boundary_ok(g.kind, g.labels[u], BoundarySide::Begin)) {
            forward[u] = true;
            queue.push_back(u);
        }
    }
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        std::uint32_t m = g.succ[u];
        while (m) {
            const std::uint32_t t = static_cast<std::uint32_t>(__builtin_ctz(m));
            m &= m - 1;
            const std::int32_t v = g.index_of[g.target_label(u, t)];
            if (v >= 0 && !forward[v]) { forward[v] = true; queue.push_back(v); }
        }
    }

    for (int u = 0; u < n; ++u) {
        if (rule.boundary_ok(g.kind, g.labels[u], BoundarySide::End)) {
            backward[u] = true;
            queue.push_back(u);
        }
    }
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int p : preds[u]) {
            if (!backward[p]) { backward[p] = true; queue.push_back(p); }
        }
    }

    std::vector<bool> keep(n);
    for (int u = 0; u < n; ++u) keep[u] = forward[u] && backward[u];
    return filter_vertices(g, keep);
}

AugmentedGraph augment(const AuxGraph& g) {
    const WindowRule rule(g.grid, g.height, 4);
    AugmentedGraph a;
    a.base = g;
    a.source_arc_length.assign(g.vertex_count(), -1);
    a.sink_arc.assign(g.vertex_count(), false);
    for (int u = 0; u < g.vertex_count(); ++u) {
        if (rule.boundary_ok(g.kind, g.labels[u], BoundarySide::Begin))
            a.source_arc_length[u] = __builtin_popcount(g.labels[u]);
        if (rule.boundary_ok(g.kind, g.labels[u], BoundarySide::End))
            a.sink_arc[u] = true;
    }
    return a;
}

void export_graph(const AuxGraph& g, std::ostream& out) {
    char buf[64];
    for (int u = 0; u < g.vertex_count(); ++u) {
        std::snprintf(buf, sizeof buf, "%d\t%x\n", u, g.labels[u]);
        out << buf;
    }
    for (int u = 0; u < g.vertex_count(); ++u) {
        std::uint32_t m = g.succ[u];
        while (m) {
            const std::uint32_t t = static_cast<std::uint32_t>(__builtin_ctz(m));
            m &= m - 1;
            const std::int32_t v = g.index_of[g.target_label(u, t)];
            if (v < 0) continue;
            std::snprintf(buf, sizeof buf, "%d\t%d\t%d\n", u, v, AuxGraph::arc_length(t));
            out << buf;
        }
    }
}

}  // namespace gridcodes
