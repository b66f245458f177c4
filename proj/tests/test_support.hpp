#ifndef GRIDCODES_TEST_SUPPORT_HPP
#define GRIDCODES_TEST_SUPPORT_HPP

#include <cstdint>
#include <set>
#include <vector>

#include "gridcodes/grid.hpp"

namespace testsupport {

using namespace gridcodes;

// Window clauses evaluated straight from the definitions on the explicit
// strip graph G_{h,width}: every vertex of columns [first_col, first_col +
// n_cols) dominated, plus the kind's separation clause among those vertices.
// Cell (row, col) of the packed labeling is bit col*h + row, which matches
// StripGraph indexing.
inline bool window_ok_by_definition(const StripGraph& g, CodeKind kind, std::uint64_t code,
                                    int first_col, int n_cols) {
    const int h = g.spec.height;
    const auto in_code = [&](int v) { return ((code >> v) & 1) != 0; };

    std::vector<int> mid;
    for (int col = first_col; col < first_col + n_cols; ++col)
        for (int row = 0; row < h; ++row) mid.push_back(col * h + row);

    const bool open_dom = uses_open_domination(kind);
    for (int v : mid) {
        bool dominated = !open_dom && in_code(v);
        for (int u : g.adj[v]) dominated = dominated || in_code(u);
        if (!dominated) return false;
    }
    if (!has_separation(kind)) return true;

    auto closed_trace = [&](int v) {
        std::set<int> t;
        if (in_code(v)) t.insert(v);
        for (int u : g.adj[v])
            if (in_code(u)) t.insert(u);
        return t;
    };
    const bool only_non_code = kind != CodeKind::ID;
    for (std::size_t i = 0; i < mid.size(); ++i) {
        if (only_non_code && in_code(mid[i])) continue;
        const auto ti = closed_trace(mid[i]);
        for (std::size_t j = i + 1; j < mid.size(); ++j) {
            if (only_non_code && in_code(mid[j])) continue;
            if (ti == closed_trace(mid[j])) return false;
        }
    }
    return true;
}

inline bool window_ok_by_definition(CodeKind kind, GridKind grid, int h, int width,
                                    std::uint64_t code, int first_col, int n_cols) {
    const StripGraph g = build_strip_graph({grid, h, width, false});
    return window_ok_by_definition(g, kind, code, first_col, n_cols);
}

}  // namespace testsupport

#endif
