#ifndef GRIDCODES_SOLVER_HPP
#define GRIDCODES_SOLVER_HPP

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <vector>

#include "gridcodes/aux_graph.hpp"
#include "gridcodes/minplus.hpp"
#include "gridcodes/oracle.hpp"
#include "gridcodes/pattern.hpp"

namespace gridcodes {

struct RunConfig {
    int threads = 1;
    int power_cap = 1000;
    std::filesystem::path store_dir;           // empty = per-process temp dir
    std::uint64_t memory_cap_bytes = 2ull << 30;
    int oracle_cap_vertices = 20;
};

struct Answer {
    bool feasible = false;
    long value = 0;

    // Certificate: which route produced the value and enough to re-derive it.
    enum class Route { Matrix, Oracle };
    Route route = Route::Matrix;
    int exponent = 0;                    // matrix power used
    int argmin_index = -1;               // diagonal index (circular) or -2 for (s,t)
    std::vector<Vertex> witness;         // oracle route: one optimal code

    static Answer infeasible(Route r, int exponent = 0) {
        Answer a;
        a.feasible = false;
        a.route = r;
        a.exponent = exponent;
        return a;
    }
};

// Minimum cardinalities for every size at once: explicit values below
// `first_periodic`, then value(n) = base[(n - first_periodic) % p] +
// ((n - first_periodic) / p) · c. kInfeasibleValue marks sizes without a code.
struct ClosedForm {
    static constexpr long kInfeasibleValue = -1;

    int min_size = 0;          // smallest size the form covers
    int first_periodic = 0;    // recurrence start u
    int p = 0;
    std::int64_t c = 0;
    std::vector<long> base;               // values at first_periodic .. first_periodic+p-1
    std::map<int, long> small;            // explicit values at min_size .. first_periodic-1
    bool all_infeasible = false;

    // Value at size n (kInfeasibleValue when no code exists).
    long eval(int n) const;
};

// Stability pipeline state for one (kind, grid, height, circular?) key.
struct StripFamily {
    CodeKind kind;
    GridKind grid;
    int height = 1;
    bool circular = true;

    int raw_vertices = 0;
    int trimmed_vertices = 0;
    AuxGraph graph;                       // trimmed (circular) or path-trimmed base
    std::optional<AugmentedGraph> augmented;
    MinPlusMatrix pi;
    StabilityResult stability;
    // Structural minimum (p, c) from the critical graph; the detected
    // certificate may carry a multiple of it.
    std::optional<std::pair<int, std::int64_t>> minimal_pc;
    std::shared_ptr<PowerStore> store;

    bool has_cert() const { return stability.cert.has_value(); }
    const StabilityCert& cert() const { return *stability.cert; }
};

// Front door for the four query shapes. Families are cached in memory and
// their power prefixes on disk, keyed by (kind, grid, height, mode), so
// repeated queries reuse earlier stability runs.
class Solver {
public:
    explicit Solver(RunConfig cfg = {});
    ~Solver();
    Solver(const Solver&) = delete;
    Solver& operator=(const Solver&) = delete;

    // Minimum cardinality of a kind-code of the circular strip of size n.
    // Sizes 3 and 4 are answered by the oracle; the matrix route needs n >= 5.
    Answer min_circular(CodeKind kind, GridKind grid, int h, int n);

    // Minimum cardinality for the non-circular strip of size n (>= 1).
    // Sizes up to 3 are answered by the oracle.
    Answer min_finite(CodeKind kind, GridKind grid, int h, int n);

    // λ/h in lowest terms, nullopt when no code of the kind exists. The
    // certificate's c/p is cross-checked against Karp's minimum cycle mean.
    std::optional<Rational> min_density_infinite(CodeKind kind, GridKind grid, int h);

    // Eventually periodic description of min cardinality over all sizes.
    ClosedForm closed_form(CodeKind kind, GridKind grid, int h, bool circular,
                           int n_max_explicit = 0);

    // A verified periodic pattern of density λ/h, nullopt when infeasible.
    std::optional<PatternGrid> optimal_pattern(CodeKind kind, GridKind grid, int h);

    // Stability pipeline state (building it on first use).
    const StripFamily& family(CodeKind kind, GridKind grid, int h, bool circular);

    const RunConfig& config() const { return cfg_; }

private:
    Answer oracle_answer(CodeKind kind, GridKind grid, int h, int n, bool circular);
    NormalizedPower family_power(const StripFamily& fam, int k);

    RunConfig cfg_;
    std::filesystem::path store_root_;
    bool owns_store_root_ = false;  // auto-created temp stores are removed on destruction
    std::map<std::tuple<int, int, int, bool>, std::unique_ptr<StripFamily>> families_;
};

// Validates (grid, h) pairs: toroidal strips need h >= 3.
void validate_strip_family(GridKind grid, int h);

}  // namespace gridcodes

#endif
