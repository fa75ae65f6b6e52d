// Empirical-average machinery: theta counts, the Barban-Davenport-Halberstam
// error sum, the A-series, the class-number route, and the model-box
// simulation.  Oracles are direct hand-filterable prime lists at tiny x, the
// twist-free per-curve box engine (exhaustive counting, no table tricks), and
// cross-module recomputation through quadform/lfun.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "frobavg/arith.hpp"
#include "frobavg/average.hpp"
#include "frobavg/galois.hpp"
#include "frobavg/lfun.hpp"
#include "frobavg/quadform.hpp"

namespace {

using frobavg::BoxBounds;
using frobavg::BoxMethod;
using frobavg::i64;
using frobavg::u64;

std::vector<u64> sorted_union_over_a(const frobavg::GaloisProfile& profile,
                                     u64 x, std::size_t tau, u64 q) {
    std::vector<u64> all;
    const auto& S = profile.taus[tau].S;
    for (u64 a = 1; a <= q * profile.m_K; ++a) {
        if (!std::binary_search(S.begin(), S.end(), a % profile.m_K)) continue;
        auto part = frobavg::theta_primes(profile, x, tau, q, a);
        all.insert(all.end(), part.begin(), part.end());
    }
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace

TEST_SUITE("average") {

TEST_CASE("theta_primes lists the degree-two primes in a residue class") {
    auto qi = frobavg::preset("qi");
    // Inert primes of Q(i) up to 20: p = 3 (mod 4) -> {3, 7, 11, 19}.
    CHECK(frobavg::theta_primes(qi, 20, 1, 1, 3) ==
          std::vector<u64>{3, 7, 11, 19});
    // Modulus 12, class 3 (not coprime): only p = 3 itself.
    CHECK(frobavg::theta_primes(qi, 20, 1, 3, 3) == std::vector<u64>{3});
    // Class incompatible with the tau congruence: empty.
    CHECK(frobavg::theta_primes(qi, 20, 1, 1, 1).empty());
    // Below the first prime: empty.
    CHECK(frobavg::theta_primes(qi, 1, 1, 1, 3).empty());

    double expect = std::log(3.0) + std::log(7.0) + std::log(11.0) +
                    std::log(19.0);
    CHECK(frobavg::theta_sum(qi, 20, 1, 1, 3) ==
          doctest::Approx(expect).epsilon(1e-12));
    CHECK(frobavg::theta_sum(qi, 20, 1, 1, 1) == 0.0);

    CHECK_THROWS_AS((void)frobavg::theta_primes(qi, 20, 5, 1, 3),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)frobavg::theta_primes(qi, 20, 1, 0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)frobavg::theta_primes(qi, 20, 1, 2, 9),
                    std::invalid_argument);  // a beyond q*m_K
}

TEST_CASE("theta partition: classes mod q*m_K tile the tau class exactly") {
    auto qi = frobavg::preset("qi");
    auto base = frobavg::theta_primes(qi, 200, 1, 1, 3);
    for (u64 q : {1, 2, 3, 5, 12}) {
        INFO("q=", q);
        CHECK(sorted_union_over_a(qi, 200, 1, q) == base);
    }
    auto e = frobavg::preset("qsqrt-3");
    auto base_e = frobavg::theta_primes(e, 200, 1, 1, 2);
    for (u64 q : {1, 2, 4, 7}) {
        INFO("q=", q);
        CHECK(sorted_union_over_a(e, 200, 1, q) == base_e);
    }
}

TEST_CASE("bdh_error at x=10, Q=1 on Q(i) (hand-checked single cell)") {
    auto qi = frobavg::preset("qi");
    auto rep = frobavg::bdh_error(qi, 10, 1, 1);
    CHECK(rep.x == 10);
    CHECK(rep.Q == 1);
    REQUIRE(rep.cells.size() == 1);  // only a = 3 is coprime and compatible
    CHECK(rep.cells[0].q == 1);
    CHECK(rep.cells[0].a == 3);
    double theta = std::log(3.0) + std::log(7.0);
    CHECK(rep.cells[0].theta == doctest::Approx(theta).epsilon(1e-12));
    CHECK(rep.cells[0].expected == doctest::Approx(5.0));  // 1*10/(1*2)
    CHECK(rep.error_sum ==
          doctest::Approx((theta - 5.0) * (theta - 5.0)).epsilon(1e-12));

    CHECK_THROWS_AS((void)frobavg::bdh_error(qi, 10, 0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)frobavg::bdh_error(qi, 10, 1, 7),
                    std::invalid_argument);
}

TEST_CASE("bdh_error cell layout and thread invariance") {
    auto qi = frobavg::preset("qi");
    auto r1 = frobavg::bdh_error(qi, 1000, 8, 1, 1);
    auto r3 = frobavg::bdh_error(qi, 1000, 8, 1, 3);
    REQUIRE(r1.cells.size() == r3.cells.size());
    for (std::size_t i = 0; i < r1.cells.size(); ++i) {
        CHECK(r1.cells[i].q == r3.cells[i].q);
        CHECK(r1.cells[i].a == r3.cells[i].a);
        CHECK(r1.cells[i].theta == r3.cells[i].theta);  // bitwise
    }
    CHECK(r1.error_sum == r3.error_sum);
    // cells ordered by (q, a); every a is coprime to q*m_K and compatible.
    for (std::size_t i = 0; i + 1 < r1.cells.size(); ++i)
        CHECK((r1.cells[i].q < r1.cells[i + 1].q ||
               (r1.cells[i].q == r1.cells[i + 1].q &&
                r1.cells[i].a < r1.cells[i + 1].a)));
    for (const auto& cell : r1.cells) {
        CHECK(std::gcd(cell.a, cell.q * 4) == 1);
        CHECK(cell.a % 4 == 3);
        CHECK(cell.expected > 0);
    }
}

TEST_CASE("A_series tiny values decompose over square divisors") {
    auto qi = frobavg::preset("qi");
    // Only p in (3, 5] would count, but 5 splits in Q(i): empty sum.
    CHECK(frobavg::A_series(qi, 1, 5, 0.5) == 0.0);
    // p = 7: D = -195 is squarefree, so only k = 1 contributes.
    double expect7 = frobavg::l_one(-195, 0.5).value * std::log(7.0);
    CHECK(frobavg::A_series(qi, 1, 7, 0.5) ==
          doctest::Approx(expect7).epsilon(1e-12));

    auto e = frobavg::preset("qsqrt-3");
    // p = 5 is inert in Q(sqrt(-3)); D = -99 = -9*11 walks k in {1, 3}.
    double expect5 = frobavg::l_one(-99, 0.5).value * std::log(5.0) +
                     frobavg::l_one(-11, 0.5).value * std::log(5.0) / 3.0;
    CHECK(frobavg::A_series(e, 1, 5, 0.5) ==
          doctest::Approx(expect5).epsilon(1e-12));

    CHECK_THROWS_AS((void)frobavg::A_series(qi, 2, 10, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)frobavg::A_series(qi, 1, 1, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)frobavg::A_series(qi, 1, 10, 0.0),
                    std::invalid_argument);
    CHECK(frobavg::A_series(qi, 1, 300, 0.5, 1) ==
          frobavg::A_series(qi, 1, 300, 0.5, 4));
}

TEST_CASE("a_series_report: grid, slope, residual bookkeeping") {
    auto qi = frobavg::preset("qi");
    auto rep = frobavg::a_series_report(qi, 1, {5, 7, 20}, 0.5);
    CHECK(rep.kind == "A_series");
    REQUIRE(rep.grid.size() == 3);
    CHECK(rep.grid[0].x == 5.0);
    CHECK(rep.grid[0].empirical == 0.0);
    CHECK(rep.predicted_slope > 0);
    REQUIRE(rep.fit_residuals.size() == 2);
    double dq = (rep.grid[1].empirical - rep.grid[0].empirical) /
                (rep.grid[1].x - rep.grid[0].x);
    CHECK(rep.fit_residuals[0] ==
          doctest::Approx(dq - rep.predicted_slope).epsilon(1e-12));

    CHECK_THROWS_AS((void)frobavg::a_series_report(qi, 1, {7, 5}, 0.5),
                    std::invalid_argument);
}

TEST_CASE("class_sum_average equals a direct Hurwitz accumulation") {
    auto qi = frobavg::preset("qi");
    auto rep = frobavg::class_sum_average(qi, 1, {10, 50, 200});
    CHECK(rep.kind == "class_sum");
    REQUIRE(rep.grid.size() == 3);
    CHECK(rep.grid[0].empirical == 0.0);  // sqrt(10) < 5: no primes above 3

    // x = 50: p = 7 only; x = 200: p in {7, 11} (13 splits).
    double h7 = frobavg::hurwitz(1 - 4 * 49).value.to_double() / 49.0;
    double h11 = frobavg::hurwitz(1 - 4 * 121).value.to_double() / 121.0;
    CHECK(rep.grid[1].empirical == doctest::Approx(h7).epsilon(1e-12));
    CHECK(rep.grid[2].empirical ==
          doctest::Approx(h7 + h11).epsilon(1e-12));
    CHECK(rep.predicted_slope > 0);
    REQUIRE(rep.fit_residuals.size() == 2);

    CHECK_THROWS_AS((void)frobavg::class_sum_average(qi, 1, {1, 10}),
                    std::invalid_argument);
    auto t1 = frobavg::class_sum_average(qi, 1, {2000}, 1);
    auto t4 = frobavg::class_sum_average(qi, 1, {2000}, 4);
    CHECK(t1.grid[0].empirical == t4.grid[0].empirical);
}

TEST_CASE("box engines agree model-for-model on Q(i)") {
    auto qi = frobavg::preset("qi");
    BoxBounds b;
    b.A = {10, 10};
    b.B = {10, 10};
    auto table = frobavg::box_run(qi, 1, b, 200, 2, BoxMethod::trace_table);
    auto naive = frobavg::box_run(qi, 1, b, 200, 2, BoxMethod::per_curve);
    CHECK(table.model_count == naive.model_count);
    REQUIRE(table.per_prime.size() == naive.per_prime.size());
    REQUIRE(table.per_prime.size() == 2);  // p = 7 and p = 11
    CHECK(table.per_prime[0].p == 7);
    CHECK(table.per_prime[1].p == 11);
    for (std::size_t i = 0; i < table.per_prime.size(); ++i)
        CHECK(table.per_prime[i].hits == naive.per_prime[i].hits);
    CHECK(table.average == naive.average);
    CHECK(table.min_coordinate == 10);
}

TEST_CASE("box engines agree on the Eisenstein ring") {
    auto e = frobavg::preset("qsqrt-3");
    BoxBounds b;
    b.A = {6, 6};
    b.B = {6, 6};
    auto table = frobavg::box_run(e, 1, b, 150, 2, BoxMethod::trace_table);
    auto naive = frobavg::box_run(e, 1, b, 150, 2, BoxMethod::per_curve);
    REQUIRE(table.per_prime.size() == 2);  // p = 5 and p = 11
    CHECK(table.per_prime[0].p == 5);
    CHECK(table.per_prime[1].p == 11);
    for (std::size_t i = 0; i < table.per_prime.size(); ++i)
        CHECK(table.per_prime[i].hits == naive.per_prime[i].hits);
    CHECK(table.model_count == naive.model_count);
}

TEST_CASE("box hits under r -> -r: exact only with uniform residue coverage") {
    auto qi = frobavg::preset("qi");
    BoxBounds b;
    // Coordinate width 2*3+1 = 7 covers every residue class mod 7 exactly
    // once, so the reduced models are uniform over F_49 x F_49 and the
    // full-space quadratic-twist bijection forces hits(r) == hits(-r) at
    // p = 7 (no such uniformity at p = 11, which is left unconstrained).
    b.A = {3, 3};
    b.B = {3, 3};
    for (i64 r : {1, 3}) {
        auto plus = frobavg::box_run(qi, r, b, 150);
        auto minus = frobavg::box_run(qi, -r, b, 150);
        REQUIRE(plus.per_prime.size() == 2);
        REQUIRE(plus.per_prime[0].p == 7);
        CHECK(plus.per_prime[0].hits == minus.per_prime[0].hits);
    }
    // A negation-symmetric box admits no involution that negates the trace:
    // conjugation fixes it (the conjugate model is the Frobenius twist) and
    // so does beta -> -beta (the twist by i, a square in F_{p^2}).  Exact
    // equality therefore fails in general; counts frozen from both engines.
    b.A = {9, 9};
    b.B = {9, 9};
    auto plus = frobavg::box_run(qi, 1, b, 150);
    auto minus = frobavg::box_run(qi, -1, b, 150);
    REQUIRE(plus.per_prime.size() == 2);
    CHECK(plus.per_prime[0].hits == 4680);
    CHECK(minus.per_prime[0].hits == 4128);
    CHECK(plus.per_prime[1].hits == 2304);
    CHECK(minus.per_prime[1].hits == 2352);
    // The averages still sit inside the statistical band used downstream.
    CHECK(std::abs(plus.average - minus.average) <= 0.2 * plus.average);
}

TEST_CASE("box structure, determinism, and guards") {
    auto qi = frobavg::preset("qi");
    BoxBounds b;
    b.A = {5, 8};
    b.B = {7, 6};
    auto r1 = frobavg::box_run(qi, 1, b, 200, 1);
    auto r4 = frobavg::box_run(qi, 1, b, 200, 4);
    REQUIRE(r1.per_prime.size() == r4.per_prime.size());
    for (std::size_t i = 0; i < r1.per_prime.size(); ++i) {
        CHECK(r1.per_prime[i].p == r4.per_prime[i].p);
        CHECK(r1.per_prime[i].hits == r4.per_prime[i].hits);
    }
    CHECK(r1.average == r4.average);
    CHECK(r1.min_coordinate == 5);

    // No prime p > 3 with p^2 <= 9: empty run, zero average.
    auto empty = frobavg::box_run(qi, 1, b, 9);
    CHECK(empty.per_prime.empty());
    CHECK(empty.average == 0.0);
    CHECK(empty.model_count > 0);

    BoxBounds bad;
    bad.A = {0, 5};
    bad.B = {5, 5};
    CHECK_THROWS_AS((void)frobavg::box_run(qi, 1, bad, 100),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)frobavg::box_run(qi, 1, b, 100000),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        (void)frobavg::box_run(frobavg::preset("s3x3m2"), 1, b, 100),
        std::invalid_argument);

    auto rep = frobavg::box_average(qi, 1, b, 200, 2);
    CHECK(rep.kind == "box");
    REQUIRE(rep.grid.size() == 1);
    CHECK(rep.grid[0].empirical == r1.average);
    CHECK(rep.predicted_slope > 0);
}

}  // TEST_SUITE
