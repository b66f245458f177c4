#include <doctest.h>

#include <stdexcept>

#include <unistd.h>

#include <filesystem>
#include <random>

#include "gridcodes/aux_graph.hpp"
#include "gridcodes/errors.hpp"
#include "gridcodes/minplus.hpp"

using namespace gridcodes;
namespace fs = std::filesystem;

namespace {

MinPlusMatrix from_rows(const std::vector<std::vector<Entry>>& rows) {
    MinPlusMatrix m(static_cast<int>(rows.size()));
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) m.at(i, j) = rows[i][j];
    return m;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("gridcodes-test-" + tag + "-" +
                                            std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

// Walk enumeration: minimum length of a k-arc walk i -> j, by recursion.
Entry brute_k_path(const MinPlusMatrix& pi, int i, int j, int k) {
    if (k == 0) return i == j ? 0 : kInfinity;
    Entry best = kInfinity;
    for (int m = 0; m < pi.dim(); ++m) {
        if (pi.at(i, m) >= kInfinity) continue;
        const Entry rest = brute_k_path(pi, m, j, k - 1);
        if (rest < kInfinity) best = std::min(best, static_cast<Entry>(pi.at(i, m) + rest));
    }
    return best;
}

const Entry INF = kInfinity;

}  // namespace

TEST_CASE("min-plus identity") {
    const auto a = from_rows({{3, INF, 7}, {0, 2, INF}, {5, 5, 5}});
    CHECK(mul(a, MinPlusMatrix::identity(3)) == a);
    CHECK(mul(MinPlusMatrix::identity(3), a) == a);
}

TEST_CASE("idempotent upper-triangular square") {
    const auto a = from_rows({{0, 1}, {INF, 0}});
    CHECK(mul(a, a) == a);
}

TEST_CASE("two-cycle square") {
    const auto a = from_rows({{INF, 1}, {2, INF}});
    CHECK(mul(a, a) == from_rows({{3, INF}, {INF, 3}}));
}

TEST_CASE("dimension mismatch and overflow are rejected") {
    CHECK_THROWS_AS(mul(MinPlusMatrix(2), MinPlusMatrix(3)), std::invalid_argument);
    auto big = from_rows({{kMaxFinite, kMaxFinite}, {kMaxFinite, kMaxFinite}});
    CHECK_THROWS_AS(mul(big, big), OverflowError);
}

TEST_CASE("product is independent of the thread count") {
    std::mt19937 rng(7);
    MinPlusMatrix a(17), b(17);
    for (int i = 0; i < 17; ++i)
        for (int j = 0; j < 17; ++j) {
            a.at(i, j) = rng() % 4 == 0 ? INF : static_cast<Entry>(rng() % 50);
            b.at(i, j) = rng() % 4 == 0 ? INF : static_cast<Entry>(rng() % 50);
        }
    const auto c1 = mul(a, b, 1);
    for (int threads : {2, 3, 8}) CHECK(mul(a, b, threads) == c1);
}

TEST_CASE("associativity on random small matrices") {
    const Entry values[] = {0, 1, 2, INF};
    std::mt19937 rng(11);
    for (int n = 1; n <= 3; ++n) {
        for (int round = 0; round < 300; ++round) {
            MinPlusMatrix m[3] = {MinPlusMatrix(n), MinPlusMatrix(n), MinPlusMatrix(n)};
            for (auto& x : m)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) x.at(i, j) = values[rng() % 4];
            CHECK(mul(mul(m[0], m[1]), m[2]) == mul(m[0], mul(m[1], m[2])));
        }
    }
}

TEST_CASE("powers give minimum k-path lengths (graphs up to 6 vertices)") {
    std::mt19937 rng(23);
    for (int round = 0; round < 20; ++round) {
        const int n = 2 + static_cast<int>(rng() % 5);
        MinPlusMatrix pi(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (rng() % 3 == 0) pi.at(i, j) = static_cast<Entry>(rng() % 4);
        MinPlusMatrix power = pi;
        for (int k = 1; k <= 6; ++k) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const Entry expect = brute_k_path(pi, i, j, k);
                    REQUIRE(power.at(i, j) == expect);
                }
            power = mul(pi, power);
        }
    }
}

TEST_CASE("normalize: offset plus normalized reconstructs the power") {
    const auto a = from_rows({{5, INF, 9}, {INF, 7, 12}, {6, INF, INF}});
    const NormalizedPower np = normalize_power(a, 1);
    CHECK_FALSE(np.all_infinite);
    CHECK(np.offset == 5);
    CHECK(np.normalized.min_finite() == 0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (a.at(i, j) >= INF) CHECK(np.normalized.at(i, j) == INF);
            else CHECK(np.normalized.at(i, j) + np.offset == a.at(i, j));
        }
}

TEST_CASE("power sequence: all-infinite matrix reports NoCircuit at once") {
    TempDir dir("allinf");
    PowerStore store = PowerStore::open(dir.path, 1);
    const auto r = detect_stability(MinPlusMatrix(3), 50, store);
    CHECK(r.outcome == StabilityOutcome::NoCircuit);
    CHECK(r.all_infinite_at == 1);
}

TEST_CASE("acyclic graphs report NoCircuit when walks run out") {
    TempDir dir("acyclic");
    PowerStore store = PowerStore::open(dir.path, 2);
    auto pi = from_rows({{INF, 4}, {INF, INF}});
    const auto r = detect_stability(pi, 50, store);
    CHECK(r.outcome == StabilityOutcome::NoCircuit);
    CHECK(r.all_infinite_at == 2);
}

TEST_CASE("single loop: offsets grow linearly, normalized stays zero") {
    TempDir dir("loop");
    PowerStore store = PowerStore::open(dir.path, 3);
    MinPlusMatrix pi(1, 2);
    PowerSequence seq(pi, store);
    for (int k = 1; k <= 5; ++k) {
        const NormalizedPower& np = seq.next();
        CHECK(np.offset == 2 * k);
        CHECK(np.normalized.at(0, 0) == 0);
    }
}

TEST_CASE("store round-trips powers byte-identically, both entry widths") {
    TempDir dir("roundtrip");
    PowerStore store = PowerStore::open(dir.path, 4);
    const auto narrow = normalize_power(from_rows({{3, INF}, {9, 3}}), 1);
    const auto wide = normalize_power(from_rows({{3, INF}, {3 + 70000, 3}}), 2);
    store.write(narrow);
    store.write(wide);
    for (const auto& p : {narrow, wide}) {
        const NormalizedPower back = store.read(p.k);
        CHECK(back.normalized == p.normalized);
        CHECK(back.offset == p.offset);
        CHECK(back.digest == p.digest);
        CHECK(back.all_infinite == p.all_infinite);
    }
    CHECK(store.exponents_with_digest(narrow.digest) == std::vector<int>{1});
    CHECK_THROWS_AS(store.read(9), StoreError);
}

TEST_CASE("a truncated power file is reported, not misread") {
    TempDir dir("trunc");
    PowerStore store = PowerStore::open(dir.path, 44);
    store.write(normalize_power(MinPlusMatrix(8, 3), 1));
    for (const auto& entry : fs::directory_iterator(dir.path)) {
        if (entry.path().filename().string().rfind("pow_", 0) == 0)
            fs::resize_file(entry.path(), 44);
    }
    CHECK_THROWS_AS(store.read(1), StoreError);
}

TEST_CASE("a store is wiped when opened against a different base matrix") {
    TempDir dir("wipe");
    {
        PowerStore store = PowerStore::open(dir.path, 5);
        store.write(normalize_power(MinPlusMatrix(1, 3), 1));
        CHECK(store.has(1));
    }
    {
        PowerStore store = PowerStore::open(dir.path, 5);
        CHECK(store.has(1));  // same base: kept
    }
    PowerStore store = PowerStore::open(dir.path, 6);
    CHECK_FALSE(store.has(1));
}

TEST_CASE("stability of the square ID chains, with power_at periodicity") {
    struct Case { int h; std::int64_t c; int p; };
    for (const auto& [h, c, p] : {Case{1, 1, 2}, Case{2, 6, 7}}) {
        TempDir dir("stab" + std::to_string(h));
        PowerStore store = PowerStore::open(dir.path, 10 + h);
        const AuxGraph g = trim(build_aux_graph(CodeKind::ID, GridKind::Square, h));
        const MinPlusMatrix pi = length_matrix(g);
        const auto r = detect_stability(pi, 1000, store);
        REQUIRE(r.outcome == StabilityOutcome::Stable);
        CHECK(r.cert->c == c);
        CHECK(r.cert->p == p);
        CHECK(r.cert->reverified);
        CHECK(r.cert->lambda == Rational(c, p));

        // prefix reads are byte-identical to what the sequence stored
        const NormalizedPower direct = store.read(r.cert->u);
        const NormalizedPower via = power_at(*r.cert, store, r.cert->u);
        CHECK(direct.normalized == via.normalized);
        CHECK(direct.offset == via.offset);

        // one period apart: same normalized matrix, offsets differ by c
        for (int k : {r.cert->u + 1, r.cert->u + p, 40, 97}) {
            const auto a = power_at(*r.cert, store, k);
            const auto b = power_at(*r.cert, store, k + p);
            CHECK(a.normalized == b.normalized);
            CHECK(b.offset - a.offset == c);
        }
    }
}

TEST_CASE("power_at with an empty store reports the missing file") {
    TempDir dir("miss");
    PowerStore store = PowerStore::open(dir.path, 99);
    StabilityCert cert;
    cert.u = 3;
    cert.p = 2;
    cert.c = 1;
    cert.lambda = Rational(1, 2);
    CHECK_THROWS_AS(power_at(cert, store, 2), StoreError);
}

TEST_CASE("detection is deterministic across thread counts") {
    const AuxGraph g = trim(build_aux_graph(CodeKind::LD, GridKind::Square, 1));
    const MinPlusMatrix pi = length_matrix(g);
    TempDir d1("det1"), d2("det2");
    PowerStore s1 = PowerStore::open(d1.path, 7), s2 = PowerStore::open(d2.path, 7);
    const auto r1 = detect_stability(pi, 1000, s1, 1);
    const auto r2 = detect_stability(pi, 1000, s2, 4);
    REQUIRE(r1.outcome == StabilityOutcome::Stable);
    REQUIRE(r2.outcome == StabilityOutcome::Stable);
    CHECK(r1.cert->c == r2.cert->c);
    CHECK(r1.cert->p == r2.cert->p);
    CHECK(r1.cert->u == r2.cert->u);
}

TEST_CASE("cap exhaustion is a distinct outcome") {
    TempDir dir("cap");
    PowerStore store = PowerStore::open(dir.path, 8);
    const AuxGraph g = trim(build_aux_graph(CodeKind::ID, GridKind::Square, 1));
    const auto r = detect_stability(length_matrix(g), 2, store);
    CHECK(r.outcome == StabilityOutcome::NotFoundWithinCap);
    CHECK(r.cap == 2);
    CHECK_THROWS_AS(detect_stability(length_matrix(g), 1, store), std::invalid_argument);
}

TEST_CASE("min mean cycle: hand-checked graphs") {
    ArcListGraph self;
    self.n = 1;
    self.out = {{{0, 3}}};
    REQUIRE(min_mean_cycle(self).has_value());
    CHECK(*min_mean_cycle(self) == Rational(3, 1));

    ArcListGraph two;
    two.n = 2;
    two.out = {{{1, 1}}, {{0, 2}, {1, 3}}};
    CHECK(*min_mean_cycle(two) == Rational(3, 2));

    ArcListGraph dag;
    dag.n = 3;
    dag.out = {{{1, 1}}, {{2, 1}}, {}};
    CHECK_FALSE(min_mean_cycle(dag).has_value());
}

TEST_CASE("min mean cycle agrees with certificates on small families") {
    struct Case { CodeKind k; GridKind g; int h; Rational lambda; };
    const Case cases[] = {{CodeKind::ID, GridKind::Square, 1, Rational(1, 2)},
                          {CodeKind::ID, GridKind::Square, 2, Rational(6, 7)},
                          {CodeKind::LD, GridKind::Square, 2, Rational(3, 4)},
                          {CodeKind::LTD, GridKind::Square, 2, Rational(4, 5)}};
    for (const auto& [k, g, h, lambda] : cases) {
        const AuxGraph t = trim(build_aux_graph(k, g, h));
        const auto mm = min_mean_cycle(t);
        REQUIRE(mm.has_value());
        CHECK(*mm == lambda);
    }
}

TEST_CASE("minimal stability period from the critical graph") {
    const AuxGraph t = trim(build_aux_graph(CodeKind::ID, GridKind::Square, 1));
    const auto [p, c] = minimal_stability_period(ArcListGraph::from(t), Rational(1, 2));
    CHECK(p == 2);
    CHECK(c == 1);

    ArcListGraph self;
    self.n = 1;
    self.out = {{{0, 3}}};
    const auto [ps, cs] = minimal_stability_period(self, Rational(3, 1));
    CHECK(ps == 1);
    CHECK(cs == 3);
}
