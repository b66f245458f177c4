#include <doctest.h>

#include <stdexcept>

#include <unistd.h>

#include <filesystem>

#include "gridcodes/solver.hpp"

using namespace gridcodes;
namespace fs = std::filesystem;

namespace {

// One solver (and one store) for the whole file keeps repeated stability
// runs out of the timings.
Solver& shared_solver() {
    static Solver solver([] {
        RunConfig cfg;
        cfg.store_dir = fs::temp_directory_path() /
                        ("gridcodes-solver-tests-" + std::to_string(::getpid()));
        fs::remove_all(cfg.store_dir);
        return cfg;
    }());
    return solver;
}

long ceil_div(long a, long b) { return (a + b - 1) / b; }

}  // namespace

TEST_CASE("min_circular: paper spot values") {
    auto& s = shared_solver();
    auto a = s.min_circular(CodeKind::ID, GridKind::Square, 1, 5);
    REQUIRE(a.feasible);
    CHECK(a.value == 3);

    a = s.min_circular(CodeKind::ID, GridKind::Square, 2, 7);
    REQUIRE(a.feasible);
    CHECK(a.value == 6);
    CHECK(a.route == Answer::Route::Matrix);
    CHECK(a.exponent == 7);
    CHECK(a.argmin_index >= 0);

    CHECK_FALSE(s.min_circular(CodeKind::ID, GridKind::King, 2, 8).feasible);

    a = s.min_circular(CodeKind::LTD, GridKind::Square, 2, 6);
    REQUIRE(a.feasible);
    CHECK(a.value == 6);
}

TEST_CASE("min_circular: small sizes go through the oracle and carry witnesses") {
    auto& s = shared_solver();
    const auto a = s.min_circular(CodeKind::D, GridKind::Square, 1, 4);
    REQUIRE(a.feasible);
    CHECK(a.route == Answer::Route::Oracle);
    CHECK(a.value == 2);
    CHECK(a.witness.size() == 2);
    CHECK_THROWS_AS(s.min_circular(CodeKind::D, GridKind::Square, 1, 2), std::invalid_argument);
}

TEST_CASE("min_finite: paper and oracle spot values") {
    auto& s = shared_solver();
    const auto oracle = brute_min({GridKind::Square, 1, 4, false}, CodeKind::ID);
    const auto a = s.min_finite(CodeKind::ID, GridKind::Square, 1, 4);
    REQUIRE(a.feasible);
    CHECK(a.value == oracle.value);

    const auto d9 = s.min_finite(CodeKind::D, GridKind::Square, 1, 9);
    REQUIRE(d9.feasible);
    CHECK(d9.value == 3);

    CHECK_FALSE(s.min_finite(CodeKind::ID, GridKind::King, 2, 6).feasible);
    CHECK_FALSE(s.min_finite(CodeKind::TD, GridKind::Square, 1, 1).feasible);
}

TEST_CASE("densities: feasible, infeasible and toroidal validation") {
    auto& s = shared_solver();
    auto d = s.min_density_infinite(CodeKind::ID, GridKind::Square, 1);
    REQUIRE(d.has_value());
    CHECK(*d == Rational(1, 2));

    d = s.min_density_infinite(CodeKind::ID, GridKind::Triangular, 2);
    REQUIRE(d.has_value());
    CHECK(*d == Rational(1, 2));

    CHECK_FALSE(s.min_density_infinite(CodeKind::ID, GridKind::King, 2).has_value());
    CHECK_THROWS_AS(s.min_density_infinite(CodeKind::ID, GridKind::ToroidalSquare, 2),
                    std::invalid_argument);
}

TEST_CASE("closed form reproduces the height-1 and height-2 square propositions") {
    auto& s = shared_solver();

    const auto id1 = s.closed_form(CodeKind::ID, GridKind::Square, 1, true, 40);
    for (int n = 5; n <= 40; ++n) {
        const long expect = n == 5 ? 3 : (n % 2 == 0 ? n / 2 : ceil_div(n, 2) + 1);
        CHECK(id1.eval(n) == expect);
    }

    const auto ld2 = s.closed_form(CodeKind::LD, GridKind::Square, 2, true, 40);
    for (int n = 5; n <= 40; ++n) {
        const long expect = ceil_div(3 * n, 4) + (n % 8 == 4 ? 1 : 0);
        CHECK(ld2.eval(n) == expect);
    }

    // sizes 3 and 4 come from the oracle
    for (int n : {3, 4}) {
        const auto o = brute_min({GridKind::Square, 1, n, true}, CodeKind::ID);
        CHECK(id1.eval(n) == (o.feasible ? o.value : ClosedForm::kInfeasibleValue));
        CHECK(id1.small.count(n) == 1);
    }
}

TEST_CASE("closed form of an infeasible family") {
    auto& s = shared_solver();
    const auto f = s.closed_form(CodeKind::ID, GridKind::King, 2, true, 20);
    CHECK(f.all_infeasible);
    for (int n = 3; n <= 20; ++n) CHECK(f.eval(n) == ClosedForm::kInfeasibleValue);
}

TEST_CASE("finite closed form agrees with min_finite across route boundaries") {
    auto& s = shared_solver();
    const auto f = s.closed_form(CodeKind::LD, GridKind::Square, 1, false, 30);
    for (int n = 1; n <= 30; ++n) {
        const auto a = s.min_finite(CodeKind::LD, GridKind::Square, 1, n);
        CHECK(f.eval(n) == (a.feasible ? a.value : ClosedForm::kInfeasibleValue));
    }
}

TEST_CASE("periodicity: value recurrence holds at sampled sizes") {
    auto& s = shared_solver();
    for (CodeKind k : {CodeKind::D, CodeKind::TD, CodeKind::LD, CodeKind::LTD, CodeKind::ID}) {
        const auto& fam = s.family(k, GridKind::Square, 2, true);
        REQUIRE(fam.has_cert());
        const auto& cert = fam.cert();
        for (int n = std::max(5, cert.u); n <= cert.u + cert.p + 12; ++n) {
            const auto a = s.min_circular(k, GridKind::Square, 2, n);
            const auto b = s.min_circular(k, GridKind::Square, 2, n + cert.p);
            REQUIRE(a.feasible);
            REQUIRE(b.feasible);
            CHECK(b.value - a.value == cert.c);
        }
    }
}

TEST_CASE("kind ladder on solved values") {
    auto& s = shared_solver();
    struct Config { GridKind g; int h; };
    for (const auto& [g, h] : {Config{GridKind::Square, 1}, Config{GridKind::Square, 2},
                               Config{GridKind::Triangular, 2}}) {
        for (int n = 5; n <= 10; ++n) {
            const long d = s.min_circular(CodeKind::D, g, h, n).value;
            const long td = s.min_circular(CodeKind::TD, g, h, n).value;
            const long ld = s.min_circular(CodeKind::LD, g, h, n).value;
            const long ltd = s.min_circular(CodeKind::LTD, g, h, n).value;
            const long id = s.min_circular(CodeKind::ID, g, h, n).value;
            CHECK(d <= ld);
            CHECK(ld <= id);
            CHECK(d <= td);
            CHECK(td <= ltd);
            CHECK(ld <= ltd);
        }
    }

    // the same ladder on the finite-strip route
    for (int n = 4; n <= 9; ++n) {
        const long d = s.min_finite(CodeKind::D, GridKind::Square, 2, n).value;
        const long td = s.min_finite(CodeKind::TD, GridKind::Square, 2, n).value;
        const long ld = s.min_finite(CodeKind::LD, GridKind::Square, 2, n).value;
        const long ltd = s.min_finite(CodeKind::LTD, GridKind::Square, 2, n).value;
        const long id = s.min_finite(CodeKind::ID, GridKind::Square, 2, n).value;
        CHECK(d <= ld);
        CHECK(ld <= id);
        CHECK(d <= td);
        CHECK(td <= ltd);
        CHECK(ld <= ltd);
    }
}

TEST_CASE("oracle agreement on a sample of both strip shapes") {
    auto& s = shared_solver();
    for (CodeKind k : {CodeKind::D, CodeKind::TD, CodeKind::LD, CodeKind::LTD, CodeKind::ID}) {
        for (int n = 5; n <= 8; ++n) {
            const auto a = s.min_circular(k, GridKind::Square, 1, n);
            const auto o = brute_min({GridKind::Square, 1, n, true}, k);
            REQUIRE(a.feasible == o.feasible);
            if (a.feasible) CHECK(a.value == o.value);
        }
        for (int n = 4; n <= 8; ++n) {
            const auto a = s.min_finite(k, GridKind::Square, 1, n);
            const auto o = brute_min({GridKind::Square, 1, n, false}, k);
            REQUIRE(a.feasible == o.feasible);
            if (a.feasible) CHECK(a.value == o.value);
        }
    }
}

TEST_CASE("oracle agreement on toroidal strips of height 3") {
    auto& s = shared_solver();
    for (CodeKind k : {CodeKind::D, CodeKind::TD, CodeKind::LD, CodeKind::LTD, CodeKind::ID}) {
        for (int n = 5; n <= 6; ++n) {
            const auto a = s.min_circular(k, GridKind::ToroidalSquare, 3, n);
            const auto o = brute_min({GridKind::ToroidalSquare, 3, n, true}, k);
            REQUIRE(a.feasible == o.feasible);
            if (a.feasible) CHECK(a.value == o.value);
        }
        for (int n = 4; n <= 6; ++n) {
            const auto a = s.min_finite(k, GridKind::ToroidalSquare, 3, n);
            const auto o = brute_min({GridKind::ToroidalSquare, 3, n, false}, k);
            REQUIRE(a.feasible == o.feasible);
            if (a.feasible) CHECK(a.value == o.value);
        }
    }
}

TEST_CASE("certificates are cached on disk and reused") {
    RunConfig cfg;
    cfg.store_dir = fs::temp_directory_path() /
                    ("gridcodes-reuse-" + std::to_string(::getpid()));
    fs::remove_all(cfg.store_dir);
    long first, second;
    {
        Solver a(cfg);
        first = a.min_circular(CodeKind::ID, GridKind::Square, 2, 23).value;
    }
    {
        Solver b(cfg);  // fresh process state, same store
        second = b.min_circular(CodeKind::ID, GridKind::Square, 2, 23).value;
        const auto& fam = b.family(CodeKind::ID, GridKind::Square, 2, true);
        CHECK(fam.cert().reverified);
    }
    CHECK(first == second);
    fs::remove_all(cfg.store_dir);
}

TEST_CASE("a cached certificate with missing power files heals by re-detection") {
    RunConfig cfg;
    cfg.store_dir = fs::temp_directory_path() /
                    ("gridcodes-heal-" + std::to_string(::getpid()));
    fs::remove_all(cfg.store_dir);
    long before;
    {
        Solver a(cfg);
        before = a.min_circular(CodeKind::ID, GridKind::Square, 1, 17).value;
    }
    // drop every stored power but keep the certificate file
    for (const auto& family_dir : fs::directory_iterator(cfg.store_dir))
        for (const auto& entry : fs::directory_iterator(family_dir))
            if (entry.path().filename().string().rfind("pow_", 0) == 0)
                fs::remove(entry.path());
    {
        Solver b(cfg);
        CHECK(b.min_circular(CodeKind::ID, GridKind::Square, 1, 17).value == before);
    }
    fs::remove_all(cfg.store_dir);
}

TEST_CASE("power cap surfaces as StabilityCapError") {
    RunConfig cfg;
    cfg.store_dir = fs::temp_directory_path() /
                    ("gridcodes-cap-" + std::to_string(::getpid()));
    fs::remove_all(cfg.store_dir);
    cfg.power_cap = 2;
    Solver s(cfg);
    CHECK_THROWS_AS(s.min_circular(CodeKind::ID, GridKind::Square, 1, 9), StabilityCapError);
    fs::remove_all(cfg.store_dir);
}
