// Truncated L(1, chi_d) evaluation.  Oracles: closed forms for the first few
// negative fundamental discriminants (pi/4, pi/(3 sqrt 3), ...) and explicit
// period tables for the character partial sums.

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "frobavg/arith.hpp"
#include "frobavg/lfun.hpp"

namespace {

using frobavg::i64;
using frobavg::u64;

const double kPi = std::acos(-1.0);

// chi_{-4} has period 4: 0,+1,0,-1; chi_{-3} period 3: 0,+1,-1.
int chi_m4(u64 n) { const int t[4] = {0, 1, 0, -1}; return t[n % 4]; }
int chi_m3(u64 n) { const int t[3] = {0, 1, -1}; return t[n % 3]; }

}  // namespace

TEST_SUITE("lfun") {

TEST_CASE("closed-form special values") {
    struct Row { i64 d; double L; };
    const Row rows[] = {
        {-4, kPi / 4},
        {-3, kPi / (3 * std::sqrt(3.0))},
        {-7, kPi / std::sqrt(7.0)},
        {-8, kPi / std::sqrt(8.0)},
        {-11, kPi / std::sqrt(11.0)},  // h = 1, w = 2
    };
    for (const auto& row : rows) {
        INFO("d=", row.d);
        auto lv = frobavg::l_one(row.d, 1e-4);
        CHECK(std::abs(lv.value - row.L) <= lv.tail_bound);
        // The bound is conservative; the actual error should be far smaller.
        CHECK(std::abs(lv.value - row.L) < 1e-3);
        // Hard guarantee holds at every explicit truncation length too.
        for (u64 y : {10, 100, 1000, 12345}) {
            auto at = frobavg::l_at(row.d, y);
            CHECK(std::abs(at.value - row.L) <= at.tail_bound);
        }
    }
}

TEST_CASE("character partial sums against period tables") {
    i64 s4 = 0, s3 = 0;
    for (u64 y = 1; y <= 200; ++y) {
        s4 += chi_m4(y);
        s3 += chi_m3(y);
        CHECK(frobavg::char_partial_sum(-4, y) == s4);
        CHECK(frobavg::char_partial_sum(-3, y) == s3);
    }
    // Filtered sum: only n coprime to the filter contribute.
    i64 expect = 0;
    for (u64 n = 1; n <= 100; ++n)
        if (std::gcd<u64>(n, 15) == 1) expect += chi_m4(n);
    CHECK(frobavg::char_partial_sum(-4, 100, 15) == expect);
}

TEST_CASE("partial sums telescope (Abel-summation consistency)") {
    for (i64 d = -3; d >= -100; --d) {
        i64 m = ((d % 4) + 4) % 4;
        if (m != 0 && m != 1) continue;
        double telescoped = 0;
        for (u64 n = 1; n <= 500; ++n) {
            i64 step = frobavg::char_partial_sum(d, n) -
                       frobavg::char_partial_sum(d, n - 1);
            telescoped += double(step) / double(n);
        }
        INFO("d=", d);
        CHECK(frobavg::l_at(d, 500).value ==
              doctest::Approx(telescoped).epsilon(1e-12));
    }
}

TEST_CASE("tail bound shrinks with y and l_one honors its knob") {
    auto a = frobavg::l_at(-163, 100);
    auto b = frobavg::l_at(-163, 10000);
    CHECK(b.tail_bound < a.tail_bound);
    CHECK(a.tail_bound == doctest::Approx(std::sqrt(163.0) * std::log(163.0) / 100));

    auto coarse = frobavg::l_one(-163, 0.5);
    auto fine = frobavg::l_one(-163, 1e-3);
    CHECK(fine.y > coarse.y);
    CHECK(fine.tail_bound < coarse.tail_bound);
    CHECK(std::abs(fine.value - coarse.value) <=
          fine.tail_bound + coarse.tail_bound);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS((void)frobavg::l_one(5, 0.1), std::invalid_argument);
    CHECK_THROWS_AS((void)frobavg::l_one(-5, 0.1), std::invalid_argument);
    CHECK_THROWS_AS((void)frobavg::l_one(-4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)frobavg::l_at(-4, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)frobavg::char_partial_sum(-4, 10, 0),
                    std::invalid_argument);
}

}  // TEST_SUITE
