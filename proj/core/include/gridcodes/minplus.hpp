#ifndef GRIDCODES_MINPLUS_HPP
#define GRIDCODES_MINPLUS_HPP

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "gridcodes/aux_graph.hpp"
#include "gridcodes/errors.hpp"
#include "gridcodes/rational.hpp"

namespace gridcodes {

// Matrix entries live in ℕ ∪ {∞}. kInfinity is an absorbing sentinel chosen
// so that sentinel + finite never wraps a 32-bit signed int; finite entries
// above kMaxFinite raise OverflowError rather than approaching the sentinel.
using Entry = std::int32_t;
inline constexpr Entry kInfinity = std::numeric_limits<Entry>::max() / 2;   // 0x3fffffff
inline constexpr Entry kMaxFinite = kInfinity / 2;

// Dense square matrix over ℕ ∪ {∞} with the (min, +) product.
class MinPlusMatrix {
public:
    MinPlusMatrix() = default;
    explicit MinPlusMatrix(int n, Entry fill = kInfinity)
        : n_(n), e_(static_cast<std::size_t>(n) * n, fill) {}

    static MinPlusMatrix identity(int n) {
        MinPlusMatrix m(n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 0;
        return m;
    }

    int dim() const { return n_; }
    Entry& at(int i, int j) { return e_[static_cast<std::size_t>(i) * n_ + j]; }
    Entry at(int i, int j) const { return e_[static_cast<std::size_t>(i) * n_ + j]; }
    const Entry* row(int i) const { return e_.data() + static_cast<std::size_t>(i) * n_; }
    Entry* row(int i) { return e_.data() + static_cast<std::size_t>(i) * n_; }
    const std::vector<Entry>& entries() const { return e_; }
    Entry* data() { return e_.data(); }

    bool operator==(const MinPlusMatrix&) const = default;

    // Entrywise minimum of the finite entries, or kInfinity if there is none.
    Entry min_finite() const;
    Entry min_diagonal() const;

    // Adds c to every finite entry.
    MinPlusMatrix translated(Entry c) const;

private:
    int n_ = 0;
    std::vector<Entry> e_;
};

// Exact (min, +) product. `threads` only partitions the output rows; the
// result is bit-identical for every thread count. Throws OverflowError if a
// finite result entry would exceed kMaxFinite.
MinPlusMatrix mul(const MinPlusMatrix& a, const MinPlusMatrix& b, int threads = 1);

// Length matrix of a transfer graph: entry (u, v) is the arc length, or ∞
// when there is no arc. Throws ResourceError if three dim² matrices would
// not fit in `memory_cap_bytes`.
MinPlusMatrix length_matrix(const AuxGraph& g, std::uint64_t memory_cap_bytes = 2ull << 30);
MinPlusMatrix length_matrix(const AugmentedGraph& g, std::uint64_t memory_cap_bytes = 2ull << 30);

// Π^k reduced to (offset, normalized): offset is the minimum finite entry
// of Π^k and `normalized` has minimum finite entry 0 with the same
// ∞-pattern. `digest` hashes the normalized entries and the dimension.
struct NormalizedPower {
    int k = 0;
    bool all_infinite = false;
    std::int64_t offset = 0;    // meaningless when all_infinite
    MinPlusMatrix normalized;
    std::uint64_t digest = 0;
};

NormalizedPower normalize_power(const MinPlusMatrix& m, int k);

// Disk-backed store of normalized powers: one binary file per exponent plus
// an append-only index mapping digest -> exponents. A store belongs to one
// matrix sequence; `open` verifies the recorded base-matrix digest and
// wipes the directory on mismatch.
class PowerStore {
public:
    static PowerStore open(const std::filesystem::path& dir, std::uint64_t base_digest);

    void write(const NormalizedPower& p);
    NormalizedPower read(int k) const;
    bool has(int k) const;
    int max_exponent() const;
    // Exponents previously stored with this digest, ascending.
    std::vector<int> exponents_with_digest(std::uint64_t digest) const;

    const std::filesystem::path& dir() const { return dir_; }

private:
    PowerStore() = default;
    std::filesystem::path dir_;
    std::map<std::uint64_t, std::vector<int>> index_;
    int max_k_ = 0;
};

// Streams Π, Π², Π³, … holding only Π and the two latest powers in memory
// and persisting every normalized power it yields.
class PowerSequence {
public:
    PowerSequence(MinPlusMatrix pi, PowerStore& store, int threads = 1);

    // Advances to the next exponent and returns its normalized form.
    const NormalizedPower& next();

    int exponent() const { return k_; }
    const MinPlusMatrix& current_power() const { return cur_; }

private:
    MinPlusMatrix pi_;
    MinPlusMatrix cur_;
    PowerStore& store_;
    NormalizedPower norm_;
    int k_ = 0;
    int threads_;
};

// Certificate of pseudo-periodicity: Π^{i+p} = Π^i + c entrywise (identical
// ∞-pattern) for all i >= u, hence λ = c/p is the minimum cycle mean.
struct StabilityCert {
    std::int64_t c = 0;
    int p = 0;
    int u = 0;
    Rational lambda;
    bool reverified = false;
};

enum class StabilityOutcome { Stable, NoCircuit, NotFoundWithinCap };

struct StabilityResult {
    StabilityOutcome outcome = StabilityOutcome::NotFoundWithinCap;
    std::optional<StabilityCert> cert;
    int all_infinite_at = 0;  // first all-∞ exponent when NoCircuit (0 = empty matrix)
    int cap = 0;
};

// Searches for the smallest k' <= cap such that some earlier power k < k'
// has an equal digest AND verifies entrywise equal normalized matrices, then
// returns u = k, p = k' - k, c = offset(k') - offset(k). A verified match
// implies stability for every i >= u (multiply both sides by Π); the
// certificate is nevertheless re-verified by explicit multiplication over
// one further period. Digest collisions are rejected by the full compare.
//
// Returns NoCircuit as soon as a power has no finite entry, and
// NotFoundWithinCap when the cap is exhausted.
StabilityResult detect_stability(const MinPlusMatrix& pi, int cap, PowerStore& store,
                                 int threads = 1);

// Π^k for arbitrary k >= 1 from a certificate and a populated store, in a
// constant number of operations: k < u+p is read back directly, otherwise
// k = u + r + j·p is the stored power u+r translated by j·c.
NormalizedPower power_at(const StabilityCert& cert, const PowerStore& store, int k);

// Minimum mean of an elementary circuit, as an exact rational; nullopt iff
// the graph is acyclic. Karp's dynamic program run per strongly connected
// component, an algorithm independent of stability detection, used to
// cross-check c/p.
std::optional<Rational> min_mean_cycle(const AuxGraph& g);

// Arc-list view shared by min_mean_cycle and the pattern extractor.
struct ArcListGraph {
    int n = 0;
    std::vector<std::vector<std::pair<int, std::int32_t>>> out;  // (target, length), ascending

    static ArcListGraph from(const AuxGraph& g);
};

std::optional<Rational> min_mean_cycle(const ArcListGraph& g);

// Arcs lying on circuits of mean exactly λ, found via Bellman-Ford
// potentials on the reweighting den·ℓ − num: an arc is tight when it
// preserves the potential, and the circuits of mean λ are exactly the
// circuits of the tight subgraph. Components are SCCs of that subgraph.
struct CriticalGraph {
    std::vector<std::vector<int>> tight_out;  // tight arcs, targets ascending
    std::vector<int> comp_of;                 // SCC id within the tight subgraph
    std::vector<bool> nontrivial;             // per SCC: contains a circuit
};

// Throws std::logic_error if some circuit has mean below λ.
CriticalGraph critical_graph(const ArcListGraph& g, const Rational& lambda);

// The smallest eventual period of the power sequence and its transfer
// factor: p = lcm over min-mean components of the gcd of their circuit
// cardinalities, c = p·λ. Computed from the graph alone, independently of
// the detected certificate.
std::pair<int, std::int64_t> minimal_stability_period(const ArcListGraph& g,
                                                      const Rational& lambda);

}  // namespace gridcodes

#endif
