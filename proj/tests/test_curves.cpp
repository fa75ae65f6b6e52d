// Trace statistics over F_{p^2}.  The oracle counts points the definitional
// way: enumerate every y, tabulate how many square roots each field element
// has, then sum 1 + #sqrt(x^3 + ax + b) over x.  That route never touches the
// norm/Legendre machinery the library uses, so agreement is meaningful.

#include <map>
#include <vector>

#include "doctest.h"
#include "frobavg/curves.hpp"
#include "frobavg/quadform.hpp"
#include "frobavg/rational.hpp"

namespace {

using frobavg::Fp2;
using frobavg::i64;
using frobavg::Rational;
using frobavg::u64;

u64 elt_id(const Fp2& F, Fp2::Elt v) { return v.c0 + F.p * v.c1; }

Fp2::Elt elt_of(const Fp2& F, u64 id) {
    return Fp2::Elt{id % F.p, id / F.p};
}

// Full y-enumeration square-root table: sq[id] = #{y : y^2 = id}.
std::vector<u64> sqrt_table(const Fp2& F) {
    u64 q = F.p * F.p;
    std::vector<u64> sq(q, 0);
    for (u64 id = 0; id < q; ++id) ++sq[elt_id(F, F.sqr(elt_of(F, id)))];
    return sq;
}

i64 trace_oracle(const Fp2& F, const std::vector<u64>& sq, Fp2::Elt a,
                 Fp2::Elt b) {
    u64 q = F.p * F.p;
    u64 points = 1;  // infinity
    for (u64 id = 0; id < q; ++id) {
        Fp2::Elt x = elt_of(F, id);
        Fp2::Elt f = F.add(F.mul(F.sqr(x), x), F.add(F.mul(a, x), b));
        points += sq[elt_id(F, f)];
    }
    return i64(q) + 1 - i64(points);
}

int aut_oracle(const Fp2& F, Fp2::Elt a, Fp2::Elt b) {
    // Isomorphisms (x, y) -> (u^2 x, u^3 y) fixing (a, b): u^4 a = a, u^6 b = b.
    u64 q = F.p * F.p;
    int count = 0;
    for (u64 id = 1; id < q; ++id) {
        Fp2::Elt u = elt_of(F, id);
        if (F.is_zero(u)) continue;
        Fp2::Elt u2 = F.sqr(u), u4 = F.sqr(u2), u6 = F.mul(u4, u2);
        if (F.eq(F.mul(u4, a), a) && F.eq(F.mul(u6, b), b)) ++count;
    }
    return count;
}

bool is_singular(const Fp2& F, Fp2::Elt a, Fp2::Elt b) {
    // -16(4a^3 + 27b^2) = 0  <=>  4a^3 + 27b^2 = 0 (p > 3).
    Fp2::Elt d = F.add(F.scale(4 % F.p, F.mul(F.sqr(a), a)),
                       F.scale(27 % F.p, F.sqr(b)));
    return F.is_zero(d);
}

}  // namespace

TEST_SUITE("curves") {

TEST_CASE("field constructor accepts odd primes and verified nonresidues") {
    CHECK_THROWS_AS(Fp2(4), std::invalid_argument);
    CHECK_THROWS_AS(Fp2(2), std::invalid_argument);
    CHECK_THROWS_AS(Fp2(3), std::invalid_argument);
    CHECK_NOTHROW(Fp2(5));
    CHECK_NOTHROW(Fp2(7, 3));                        // 3 is a nonresidue mod 7
    CHECK_THROWS_AS(Fp2(7, 2), std::invalid_argument);  // 2 = 3^2 mod 7
    CHECK_THROWS_AS(Fp2(7, 0), std::invalid_argument);
}

TEST_CASE("field arithmetic: inverses, norms, and the quadratic character") {
    Fp2 F(13);
    u64 q = 13 * 13;
    for (u64 id = 1; id < q; ++id) {
        Fp2::Elt v = elt_of(F, id);
        CHECK(F.eq(F.mul(v, F.inv(v)), F.make(1, 0)));
        CHECK(F.norm(v) < 13);
        CHECK(F.norm(v) != 0);
        CHECK(F.chi2(v) != 0);
    }
    CHECK_THROWS_AS((void)F.inv(F.make(0, 0)), std::invalid_argument);
    // norm and chi2 are multiplicative
    for (u64 i = 1; i < q; i += 7)
        for (u64 j = 1; j < q; j += 11) {
            Fp2::Elt v = elt_of(F, i), w = elt_of(F, j);
            CHECK(F.norm(F.mul(v, w)) ==
                  frobavg::mulmod(F.norm(v), F.norm(w), 13));
            CHECK(F.chi2(F.mul(v, w)) == F.chi2(v) * F.chi2(w));
        }
    // -1 is always a square in F_{p^2}: (p^2 - 1)/2 is divisible by 4.
    CHECK(F.chi2(F.make(-1, 0)) == 1);
    CHECK(Fp2(7).chi2(Fp2(7).make(-1, 0)) == 1);
}

TEST_CASE("trace_of matches the point-count oracle on every model (p=5)") {
    Fp2 F(5);
    auto sq = sqrt_table(F);
    u64 q = 25;
    for (u64 ia = 0; ia < q; ++ia)
        for (u64 ib = 0; ib < q; ++ib) {
            Fp2::Elt a = elt_of(F, ia), b = elt_of(F, ib);
            if (is_singular(F, a, b)) continue;
            INFO("a=", ia, " b=", ib);
            CHECK(frobavg::trace_of(F, a, b) == trace_oracle(F, sq, a, b));
        }
}

TEST_CASE("trace_of spot-checks against the oracle (p=11)") {
    Fp2 F(11);
    auto sq = sqrt_table(F);
    for (u64 ia = 0; ia < 121; ia += 13)
        for (u64 ib = 1; ib < 121; ib += 17) {
            Fp2::Elt a = elt_of(F, ia), b = elt_of(F, ib);
            if (is_singular(F, a, b)) continue;
            i64 t = frobavg::trace_of(F, a, b);
            CHECK(t == trace_oracle(F, sq, a, b));
            CHECK(t * t <= i64(4 * 121));  // Hasse
        }
}

TEST_CASE("twist-orbit identity: trace(a,b) = chi2(ab) * trace(w,w)") {
    Fp2 F(13);
    for (u64 ia = 1; ia < 169; ia += 5)
        for (u64 ib = 1; ib < 169; ib += 7) {
            Fp2::Elt a = elt_of(F, ia), b = elt_of(F, ib);
            if (F.is_zero(a) || F.is_zero(b) || is_singular(F, a, b)) continue;
            Fp2::Elt w = F.mul(F.mul(F.sqr(a), a), F.inv(F.sqr(b)));
            i64 lhs = frobavg::trace_of(F, a, b);
            i64 rhs = F.chi2(F.mul(a, b)) * frobavg::trace_of(F, w, w);
            CHECK(lhs == rhs);
        }
}

TEST_CASE("aut_order matches the automorphism-count oracle (p=5)") {
    Fp2 F(5);
    for (u64 ia = 0; ia < 25; ++ia)
        for (u64 ib = 0; ib < 25; ++ib) {
            Fp2::Elt a = elt_of(F, ia), b = elt_of(F, ib);
            if (is_singular(F, a, b)) continue;
            INFO("a=", ia, " b=", ib);
            CHECK(frobavg::aut_order(F, a, b) == aut_oracle(F, a, b));
        }
}

TEST_CASE("histogram at p=5: Deuring masses, total, and symmetry") {
    auto h = frobavg::trace_histogram(5);
    CHECK(h.p == 5);

    u64 total_models = 0;
    for (const auto& [t, c] : h.models) {
        CHECK(t * t <= 100);  // Hasse over F_25
        total_models += c;
        CHECK(h.model_count(-t) == c);  // twist symmetry, exact
    }
    CHECK(total_models == 600);  // q^2 - q
    CHECK(h.weighted_total() == Rational(25));

    // Deuring: ordinary traces match the Hurwitz class number exactly.
    CHECK(h.weighted(1) == Rational(3, 2));  // H(-99)
    Rational ordinary;
    for (i64 r = -9; r <= 9; ++r) {
        if (r == 0 || r % 5 == 0) continue;
        Rational H = frobavg::hurwitz(r * r - 100).value;
        INFO("r=", r);
        CHECK(h.weighted(r) == H);
        ordinary += H;
    }

    // Whatever mass is not ordinary sits on the supersingular slice.
    auto ss = frobavg::supersingular_slice(h);
    Rational ss_mass;
    for (const auto& [t, c] : ss.models) {
        CHECK(t % 5 == 0);
        ss_mass += ss.weighted(t);
    }
    CHECK(ss_mass + ordinary == Rational(25));
}

TEST_CASE("histogram at p=7 is thread-invariant and Deuring-exact") {
    auto h1 = frobavg::trace_histogram(7, 1);
    auto h4 = frobavg::trace_histogram(7, 4);
    CHECK(h1.models == h4.models);
    CHECK(h1.weighted_total() == Rational(49));
    for (i64 r = -13; r <= 13; ++r) {
        if (r == 0 || r % 7 == 0) continue;
        INFO("r=", r);
        CHECK(h1.weighted(r) == frobavg::hurwitz(r * r - 196).value);
    }
}

TEST_CASE("deuring_check endpoints") {
    auto res = frobavg::deuring_check(5, 1);
    CHECK(res.lhs == Rational(3, 2));
    CHECK(res.rhs == Rational(3, 2));
    CHECK(res.equal);

    CHECK_THROWS_AS((void)frobavg::deuring_check(5, 5), std::invalid_argument);
    CHECK_THROWS_AS((void)frobavg::deuring_check(5, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)frobavg::deuring_check(5, 10), std::invalid_argument);
    CHECK_THROWS_AS((void)frobavg::deuring_check(4, 1), std::invalid_argument);
}

TEST_CASE("histogram refuses primes beyond its cost guard") {
    CHECK_THROWS_AS((void)frobavg::trace_histogram(41, 1, 37),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)frobavg::trace_histogram(6, 1, 37),
                    std::invalid_argument);
}

}  // TEST_SUITE
