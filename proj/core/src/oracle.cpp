#include "gridcodes/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

#include "gridcodes/errors.hpp"

namespace gridcodes {

namespace {

std::uint64_t hash_trace(const std::vector<int>& t) {
    std::uint64_t h = 1469598103934665603ull;
    for (int v : t) {
        h ^= static_cast<std::uint64_t>(v) + 1;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

bool is_code(const StripGraph& graph, const std::vector<bool>& in_code, CodeKind kind) {
    const int n = graph.vertex_count();
    if (static_cast<int>(in_code.size()) != n)
        throw std::invalid_argument("label vector does not match the graph");

    const bool open_dom = uses_open_domination(kind);
    for (int v = 0; v < n; ++v) {
        bool dominated = !open_dom && in_code[v];
        for (int u : graph.adj[v]) {
            if (in_code[u]) { dominated = true; break; }
        }
        if (!dominated) return false;
    }
    if (!has_separation(kind)) return true;

    // Closed traces, bucketed by hash so only candidate-equal pairs are
    // compared; two equal traces among the relevant vertices break the code.
    const bool only_non_code = kind != CodeKind::ID;
    std::vector<std::vector<int>> traces(n);
    std::unordered_map<std::uint64_t, std::vector<int>> buckets;
    for (int v = 0; v < n; ++v) {
        if (only_non_code && in_code[v]) continue;
        auto& t = traces[v];
        if (in_code[v]) t.push_back(v);
        for (int u : graph.adj[v])
            if (in_code[u]) t.push_back(u);
        std::sort(t.begin(), t.end());
        auto& bucket = buckets[hash_trace(t)];
        for (int w : bucket)
            if (traces[w] == t) return false;
        bucket.push_back(v);
    }
    return true;
}

bool is_code(const ExplicitCode& code, CodeKind kind) {
    const StripGraph graph = build_strip_graph(code.strip);
    std::vector<bool> in_code(graph.vertex_count(), false);
    for (const Vertex& v : code.members) {
        if (v.row < 0 || v.row >= code.strip.height || v.col < 0 || v.col >= code.strip.size)
            throw std::invalid_argument("code member outside the strip");
        in_code[graph.index_of(v)] = true;
    }
    return is_code(graph, in_code, kind);
}

OracleAnswer brute_min(const StripSpec& strip, CodeKind kind, int cap_vertices) {
    const StripGraph graph = build_strip_graph(strip);
    const int n = graph.vertex_count();
    if (n > cap_vertices)
        throw ResourceError("brute_min: " + std::to_string(n) +
                            " vertices exceed the cap of " + std::to_string(cap_vertices));
    if (n > 31) throw ResourceError("brute_min: subset masks support at most 31 vertices");

    std::vector<std::uint32_t> closed(n, 0), open(n, 0);
    for (int v = 0; v < n; ++v) {
        std::uint32_t m = 0;
        for (int u : graph.adj[v]) m |= 1u << u;
        open[v] = m;
        closed[v] = m | (1u << v);
    }

    const bool open_dom = uses_open_domination(kind);
    const bool separation = has_separation(kind);
    const bool only_non_code = kind != CodeKind::ID;

    auto subset_is_code = [&](std::uint32_t s) {
        for (int v = 0; v < n; ++v)
            if (((open_dom ? open[v] : closed[v]) & s) == 0) return false;
        if (separation) {
            for (int v = 0; v < n; ++v) {
                if (only_non_code && ((s >> v) & 1)) continue;
                const std::uint32_t tv = closed[v] & s;
                for (int w = v + 1; w < n; ++w) {
                    if (only_non_code && ((s >> w) & 1)) continue;
                    if (tv == (closed[w] & s)) return false;
                }
            }
        }
        return true;
    };

    OracleAnswer answer;
    const std::uint32_t full = (n == 31) ? 0x7fffffffu : ((1u << n) - 1);
    if (!subset_is_code(full)) return answer;  // no superset can succeed either

    for (int card = 0; card <= n; ++card) {
        // Gosper's hack: subsets of fixed cardinality in increasing value.
        if (card == 0) {
            if (subset_is_code(0)) { answer.feasible = true; answer.value = 0; return answer; }
            continue;
        }
        std::uint32_t s = (1u << card) - 1;
        while (s <= full) {
            if (subset_is_code(s)) {
                answer.feasible = true;
                answer.value = card;
                for (int v = 0; v < n; ++v)
                    if ((s >> v) & 1) answer.witness.push_back(graph.vertex_at(v));
                return answer;
            }
            const std::uint32_t c = s & -s;
            const std::uint32_t r = s + c;
            s = (((r ^ s) >> 2) / c) | r;
        }
    }
    answer.feasible = true;  // unreachable: the full set already passed
    answer.value = n;
    return answer;
}

}  // namespace gridcodes
