#include "gridcodes/minplus.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace gridcodes {

Entry MinPlusMatrix::min_finite() const {
    Entry best = kInfinity;
    for (Entry v : e_)
        if (v < best) best = v;
    return best;
}

Entry MinPlusMatrix::min_diagonal() const {
    Entry best = kInfinity;
    for (int i = 0; i < n_; ++i) best = std::min(best, at(i, i));
    return best;
}

MinPlusMatrix MinPlusMatrix::translated(Entry c) const {
    MinPlusMatrix out(n_);
    for (std::size_t i = 0; i < e_.size(); ++i) {
        if (e_[i] >= kInfinity) continue;
        const Entry v = e_[i] + c;
        if (v > kMaxFinite) throw OverflowError("translated entry exceeds the finite range");
        out.e_[i] = v;
    }
    return out;
}

namespace {

void mul_rows(const MinPlusMatrix& a, const MinPlusMatrix& b, MinPlusMatrix& c,
              int row_begin, int row_end) {
    const int n = a.dim();
    for (int i = row_begin; i < row_end; ++i) {
        Entry* crow = c.row(i);
        std::fill(crow, crow + n, kInfinity);
        const Entry* arow = a.row(i);
        for (int k = 0; k < n; ++k) {
            const Entry va = arow[k];
            if (va >= kInfinity) continue;
            if (va > kMaxFinite) throw OverflowError("matrix entry exceeds the finite range");
            const Entry* brow = b.row(k);
            // va + ∞ stays below 2^31, so the plain add cannot wrap; values
            // at or above kInfinity are clamped back to the sentinel below.
            for (int j = 0; j < n; ++j) crow[j] = std::min(crow[j], va + brow[j]);
        }
        for (int j = 0; j < n; ++j) {
            if (crow[j] >= kInfinity) crow[j] = kInfinity;
            else if (crow[j] > kMaxFinite)
                throw OverflowError("min-plus product entry exceeds the finite range");
        }
    }
}

}  // namespace

MinPlusMatrix mul(const MinPlusMatrix& a, const MinPlusMatrix& b, int threads) {
    if (a.dim() != b.dim()) throw std::invalid_argument("min-plus product: dimension mismatch");
    const int n = a.dim();
    MinPlusMatrix c(n);
    if (n == 0) return c;

    threads = std::clamp(threads, 1, n);
    if (threads == 1) {
        mul_rows(a, b, c, 0, n);
        return c;
    }

    // Rows are partitioned into contiguous blocks; every row is computed
    // independently, so the result does not depend on the thread count.
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const int per = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int lo = t * per;
        const int hi = std::min(n, lo + per);
        pool.emplace_back([&, t, lo, hi] {
            try {
                mul_rows(a, b, c, lo, hi);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
    return c;
}

MinPlusMatrix length_matrix(const AuxGraph& g, std::uint64_t memory_cap_bytes) {
    const std::uint64_t n = static_cast<std::uint64_t>(g.vertex_count());
    if (3 * n * n * sizeof(Entry) > memory_cap_bytes)
        throw ResourceError("three " + std::to_string(n) + "x" + std::to_string(n) +
                            " matrices exceed the memory cap of " +
                            std::to_string(memory_cap_bytes) + " bytes");
    MinPlusMatrix m(static_cast<int>(n));
    for (int u = 0; u < g.vertex_count(); ++u) {
        std::uint32_t mask = g.succ[u];
        while (mask) {
            const std::uint32_t t = static_cast<std::uint32_t>(__builtin_ctz(mask));
            mask &= mask - 1;
            const std::int32_t v = g.index_of[g.target_label(u, t)];
            if (v < 0) continue;
            m.at(u, v) = std::min(m.at(u, v), static_cast<Entry>(AuxGraph::arc_length(t)));
        }
    }
    return m;
}

MinPlusMatrix length_matrix(const AugmentedGraph& g, std::uint64_t memory_cap_bytes) {
    const int nb = g.base.vertex_count();
    const std::uint64_t n = static_cast<std::uint64_t>(nb) + 2;
    if (3 * n * n * sizeof(Entry) > memory_cap_bytes)
        throw ResourceError("three " + std::to_string(n) + "x" + std::to_string(n) +
                            " matrices exceed the memory cap of " +
                            std::to_string(memory_cap_bytes) + " bytes");
    MinPlusMatrix m(static_cast<int>(n));
    for (int u = 0; u < nb; ++u) {
        std::uint32_t mask = g.base.succ[u];
        while (mask) {
            const std::uint32_t t = static_cast<std::uint32_t>(__builtin_ctz(mask));
            mask &= mask - 1;
            const std::int32_t v = g.base.index_of[g.base.target_label(u, t)];
            if (v < 0) continue;
            m.at(u, v) = std::min(m.at(u, v), static_cast<Entry>(AuxGraph::arc_length(t)));
        }
        if (g.source_arc_length[u] >= 0) m.at(g.source_index(), u) = g.source_arc_length[u];
        if (g.sink_arc[u]) m.at(u, g.sink_index()) = 0;
    }
    return m;
}

namespace {

// FNV-1a over 8-byte words; fast enough to hash every power, and any rare
// collision is caught by the full matrix comparison that follows a match.
std::uint64_t fnv64(const void* data, std::size_t bytes, std::uint64_t h) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    constexpr std::uint64_t prime = 1099511628211ull;
    std::size_t i = 0;
    for (; i + 8 <= bytes; i += 8) {
        std::uint64_t w;
        std::memcpy(&w, p + i, 8);
        h = (h ^ w) * prime;
    }
    for (; i < bytes; ++i) h = (h ^ p[i]) * prime;
    return h;
}

}  // namespace

NormalizedPower normalize_power(const MinPlusMatrix& m, int k) {
    NormalizedPower np;
    np.k = k;
    const Entry min = m.min_finite();
    if (min >= kInfinity) {
        np.all_infinite = true;
        np.normalized = m;
    } else {
        np.offset = min;
        np.normalized = MinPlusMatrix(m.dim());
        const auto& src = m.entries();
        for (int i = 0; i < m.dim(); ++i) {
            Entry* row = np.normalized.row(i);
            const Entry* s = src.data() + static_cast<std::size_t>(i) * m.dim();
            for (int j = 0; j < m.dim(); ++j) row[j] = s[j] >= kInfinity ? kInfinity : s[j] - min;
        }
    }
    const std::uint32_t dim = static_cast<std::uint32_t>(m.dim());
    std::uint64_t h = fnv64(&dim, sizeof dim, 1469598103934665603ull);
    np.digest = fnv64(np.normalized.entries().data(),
                      np.normalized.entries().size() * sizeof(Entry), h);
    return np;
}

ArcListGraph ArcListGraph::from(const AuxGraph& g) {
    ArcListGraph a;
    a.n = g.vertex_count();
    a.out.resize(a.n);
    for (int u = 0; u < a.n; ++u) {
        std::uint32_t mask = g.succ[u];
        while (mask) {
            const std::uint32_t t = static_cast<std::uint32_t>(__builtin_ctz(mask));
            mask &= mask - 1;
            const std::int32_t v = g.index_of[g.target_label(u, t)];
            if (v >= 0) a.out[u].emplace_back(v, AuxGraph::arc_length(t));
        }
        std::sort(a.out[u].begin(), a.out[u].end());
    }
    return a;
}

namespace {

// Iterative Tarjan; components are emitted in a deterministic order.
std::vector<std::vector<int>> strongly_connected_components(const ArcListGraph& g) {
    const int n = g.n;
    std::vector<int> index(n, -1), low(n, 0), on_stack(n, 0);
    std::vector<int> stack, comp_of(n, -1);
    std::vector<std::vector<int>> comps;
    int next_index = 0;

    struct Frame { int v; std::size_t edge; };
    std::vector<Frame> frames;
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        frames.push_back({root, 0});
        while (!frames.empty()) {
            auto& f = frames.back();
            const int v = f.v;
            if (f.edge == 0) {
                index[v] = low[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            while (f.edge < g.out[v].size()) {
                const int w = g.out[v][f.edge].first;
                ++f.edge;
                if (index[w] == -1) {
                    frames.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                std::vector<int> comp;
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp_of[w] = static_cast<int>(comps.size());
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                comps.push_back(std::move(comp));
            }
            frames.pop_back();
            if (!frames.empty()) {
                const int parent = frames.back().v;
                low[parent] = std::min(low[parent], low[v]);
            }
        }
    }
    return comps;
}

}  // namespace

std::optional<Rational> min_mean_cycle(const ArcListGraph& g) {
    std::optional<Rational> best;
    constexpr std::int64_t kBig = std::numeric_limits<std::int64_t>::max() / 4;

    for (const auto& comp : strongly_connected_components(g)) {
        const int ns = static_cast<int>(comp.size());
        bool has_arc = false;
        std::vector<int> local(g.n, -1);
        for (int i = 0; i < ns; ++i) local[comp[i]] = i;
        std::vector<std::vector<std::pair<int, std::int32_t>>> arcs(ns);
        for (int i = 0; i < ns; ++i) {
            for (const auto& [w, len] : g.out[comp[i]]) {
                if (local[w] >= 0) {
                    arcs[i].emplace_back(local[w], len);
                    has_arc = true;
                }
            }
        }
        if (!has_arc) continue;  // trivial component

        // Karp: D[k][v] = min length of a k-arc walk from vertex 0 of the
        // component; λ = min_v max_k (D[n][v] − D[k][v]) / (n − k).
        std::vector<std::vector<std::int64_t>> d(ns + 1, std::vector<std::int64_t>(ns, kBig));
        d[0][0] = 0;
        for (int k = 1; k <= ns; ++k) {
            for (int u = 0; u < ns; ++u) {
                if (d[k - 1][u] >= kBig) continue;
                for (const auto& [v, len] : arcs[u])
                    d[k][v] = std::min(d[k][v], d[k - 1][u] + len);
            }
        }
        for (int v = 0; v < ns; ++v) {
            if (d[ns][v] >= kBig) continue;
            std::optional<Rational> worst;
            for (int k = 0; k < ns; ++k) {
                if (d[k][v] >= kBig) continue;
                Rational r(d[ns][v] - d[k][v], ns - k);
                if (!worst || *worst < r) worst = r;
            }
            if (worst && (!best || *worst < *best)) best = worst;
        }
    }
    return best;
}

std::optional<Rational> min_mean_cycle(const AuxGraph& g) {
    return min_mean_cycle(ArcListGraph::from(g));
}

CriticalGraph critical_graph(const ArcListGraph& g, const Rational& lambda) {
    const int n = g.n;
    std::vector<std::int64_t> pot(n, 0);
    bool changed = true;
    for (int round = 0; round <= n && changed; ++round) {
        changed = false;
        for (int u = 0; u < n; ++u) {
            for (const auto& [v, len] : g.out[u]) {
                const std::int64_t w = lambda.den() * len - lambda.num();
                if (pot[u] + w < pot[v]) {
                    pot[v] = pot[u] + w;
                    changed = true;
                }
            }
        }
        if (round == n && changed)
            throw std::logic_error("a circuit of mean below the certified λ exists");
    }

    CriticalGraph c;
    c.tight_out.resize(n);
    for (int u = 0; u < n; ++u) {
        for (const auto& [v, len] : g.out[u]) {
            if (pot[u] + (lambda.den() * len - lambda.num()) == pot[v]) c.tight_out[u].push_back(v);
        }
    }

    ArcListGraph tight;
    tight.n = n;
    tight.out.resize(n);
    for (int u = 0; u < n; ++u)
        for (int v : c.tight_out[u]) tight.out[u].emplace_back(v, 0);

    c.comp_of.assign(n, -1);
    const auto comps = strongly_connected_components(tight);
    c.nontrivial.resize(comps.size());
    for (std::size_t id = 0; id < comps.size(); ++id) {
        bool cyclic = comps[id].size() > 1;
        for (int v : comps[id]) {
            c.comp_of[v] = static_cast<int>(id);
            if (!cyclic) {
                for (int w : c.tight_out[v])
                    if (w == v) { cyclic = true; break; }
            }
        }
        c.nontrivial[id] = cyclic;
    }
    return c;
}

std::pair<int, std::int64_t> minimal_stability_period(const ArcListGraph& g,
                                                      const Rational& lambda) {
    const CriticalGraph c = critical_graph(g, lambda);
    const int n = g.n;

    // Cyclicity of one component: gcd of its circuit cardinalities, read off
    // BFS levels as gcd over internal arcs of level(u) + 1 − level(v).
    std::vector<int> level(n, -1);
    std::int64_t p = 1;
    std::vector<bool> seen_comp(c.nontrivial.size(), false);
    for (int root = 0; root < n; ++root) {
        const int id = c.comp_of[root];
        if (id < 0 || !c.nontrivial[id] || seen_comp[id]) continue;
        seen_comp[id] = true;

        std::vector<int> queue{root};
        level[root] = 0;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const int u = queue[qi];
            for (int v : c.tight_out[u]) {
                if (c.comp_of[v] == id && level[v] < 0) {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        std::int64_t cyc = 0;
        for (int u : queue)
            for (int v : c.tight_out[u])
                if (c.comp_of[v] == id)
                    cyc = std::gcd(cyc, static_cast<std::int64_t>(level[u]) + 1 - level[v]);
        if (cyc == 0) throw std::logic_error("nontrivial component without a circuit");
        p = std::lcm(p, cyc);
    }

    const std::int64_t c_min = p * lambda.num() / lambda.den();
    if (c_min * lambda.den() != p * lambda.num())
        throw std::logic_error("minimal period is not a multiple of λ's denominator");
    return {static_cast<int>(p), c_min};
}

}  // namespace gridcodes
