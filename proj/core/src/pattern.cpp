#include "gridcodes/pattern.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <stdexcept>

#include "gridcodes/oracle.hpp"

namespace gridcodes {

std::vector<int> extract_min_mean_cycle(const AuxGraph& g, const Rational& lambda) {
    const ArcListGraph arcs = ArcListGraph::from(g);
    const CriticalGraph tight = critical_graph(arcs, lambda);

    int start = -1;
    for (int v = 0; v < arcs.n; ++v) {
        if (tight.comp_of[v] >= 0 && tight.nontrivial[tight.comp_of[v]]) { start = v; break; }
    }
    if (start < 0) throw std::logic_error("no circuit of the certified mean λ exists");
    const int comp = tight.comp_of[start];

    // Fewest-arc distances to `start` inside its component: BFS over the
    // reversed tight arcs.
    std::vector<int> dist_to_start(arcs.n, -1);
    std::vector<std::vector<int>> rev(arcs.n);
    for (int u = 0; u < arcs.n; ++u) {
        if (tight.comp_of[u] != comp) continue;
        for (int v : tight.tight_out[u])
            if (tight.comp_of[v] == comp) rev[v].push_back(u);
    }
    std::deque<int> queue{start};
    dist_to_start[start] = 0;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int u : rev[v]) {
            if (dist_to_start[u] < 0) {
                dist_to_start[u] = dist_to_start[v] + 1;
                queue.push_back(u);
            }
        }
    }

    // Shortest circuit through `start`, following smallest successors.
    int remaining = -1;
    for (int v : tight.tight_out[start]) {
        if (tight.comp_of[v] == comp && dist_to_start[v] >= 0 &&
            (remaining < 0 || dist_to_start[v] + 1 < remaining))
            remaining = dist_to_start[v] + 1;
    }
    if (remaining < 0) throw std::logic_error("tight component lost its circuit");

    std::vector<int> cycle{start};
    int cur = start;
    while (remaining > 0) {
        int next = -1;
        for (int v : tight.tight_out[cur]) {
            if (tight.comp_of[v] == comp && dist_to_start[v] == remaining - 1) { next = v; break; }
        }
        if (next < 0) throw std::logic_error("tight component lost its circuit");
        --remaining;
        if (remaining > 0) cycle.push_back(next);
        cur = next;
    }
    return cycle;
}

PatternGrid cycle_to_pattern(const AuxGraph& g, const std::vector<int>& cycle) {
    if (cycle.empty()) throw std::invalid_argument("empty cycle");
    const int h = g.height;
    const std::uint32_t low3 = (1u << (3 * h)) - 1;

    PatternGrid p;
    p.height = h;
    p.period = static_cast<int>(cycle.size());
    p.cells.assign(static_cast<std::size_t>(h) * p.period, 0);

    long ones = 0;
    for (int i = 0; i < p.period; ++i) {
        const std::uint32_t from = g.labels[cycle[i]];
        const std::uint32_t to = g.labels[cycle[(i + 1) % p.period]];
        if ((from >> h) != (to & low3))
            throw std::logic_error("consecutive cycle vertices are not compatible");
        const std::uint32_t new_col = to >> (3 * h);
        for (int r = 0; r < h; ++r) {
            if ((new_col >> r) & 1) {
                p.cells[static_cast<std::size_t>(i) * h + r] = 1;
                ++ones;
            }
        }
    }
    p.density = Rational(ones, static_cast<std::int64_t>(h) * p.period);
    return p;
}

bool verify_pattern(const PatternGrid& p, CodeKind kind, GridKind grid) {
    if (p.height < 1 || p.period < 1) return false;

    long ones = 0;
    for (std::uint8_t c : p.cells) ones += c;
    if (!(p.density == Rational(ones, static_cast<std::int64_t>(p.height) * p.period)))
        return false;

    // At least three periods and at least five columns, so that every
    // window of the infinite repetition occurs in the circular tiling.
    int reps = 3;
    while (reps * p.period < 5) ++reps;
    const int size = reps * p.period;

    StripSpec spec{grid, p.height, size, true};
    ExplicitCode code{spec, {}};
    for (int col = 0; col < size; ++col)
        for (int r = 0; r < p.height; ++r)
            if (p.at(r, col % p.period)) code.members.push_back({r, col});
    return is_code(code, kind);
}

void render_pattern(const PatternGrid& p, CodeKind kind, GridKind grid, std::ostream& out) {
    out << "# " << to_string(kind) << ' ' << to_string(grid) << ' ' << p.height << ' '
        << p.period << " density=" << p.density.str() << '\n';
    for (int r = 0; r < p.height; ++r) {
        for (int c = 0; c < p.period; ++c) out << (p.at(r, c) ? 'X' : '.');
        out << '\n';
    }
}

}  // namespace gridcodes
