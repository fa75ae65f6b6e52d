// Field profiles and splitting data.  The oracle for frobenius_degree is
// classical splitting theory evaluated by hand: in Q(i) a prime is inert
// exactly when p = 3 (mod 4); in Q(sqrt(-3)) exactly when p = 2 (mod 3); in
// the splitting field of x^3 - 2 the degree is 2 exactly when p = 2 (mod 3)
// (complex conjugation classes) and 1 or 3 when p = 1 (mod 3) according to
// whether 2 is a cube mod p.

#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "frobavg/arith.hpp"
#include "frobavg/galois.hpp"

namespace {

using frobavg::u64;

std::string write_temp_profile(const std::string& body, const char* name) {
    std::string path = std::string("/tmp/") + name;
    std::ofstream out(path);
    out << body;
    out.close();
    return path;
}

bool is_cube_mod(u64 a, u64 p) {
    // p = 1 (mod 3): a is a cube iff a^((p-1)/3) = 1.
    return frobavg::powmod(a % p, (p - 1) / 3, p) == 1;
}

}  // namespace

TEST_SUITE("galois") {

TEST_CASE("presets load, validate, and reject unknown names") {
    for (const char* name : {"qi", "qsqrt-3", "s3x3m2"}) {
        auto gp = frobavg::preset(name);
        CHECK(gp.name == name);
        CHECK_NOTHROW(gp.validate());
    }
    CHECK_THROWS_AS((void)frobavg::preset("qx"), frobavg::ProfileError);

    auto qi = frobavg::preset("qi");
    CHECK(qi.m_K == 4);
    CHECK(qi.n_K == 2);
    CHECK(qi.taus.size() == 2);
    CHECK(qi.is_ramified(2));
    CHECK_FALSE(qi.is_ramified(5));

    auto sextic = frobavg::preset("s3x3m2");
    CHECK(sextic.n_K == 6);
    CHECK(sextic.n_Kprime == 2);
    CHECK(sextic.taus[1].c_size == 3);  // the three transpositions of S_3
}

TEST_CASE("validate rejects tampered profiles") {
    auto gp = frobavg::preset("qi");
    gp.taus[1].S = {2};  // not coprime to m_K
    CHECK_THROWS_AS(gp.validate(), frobavg::ProfileError);

    gp = frobavg::preset("qi");
    gp.ramified_primes = {};  // 2 | m_K must be listed
    CHECK_THROWS_AS(gp.validate(), frobavg::ProfileError);

    gp = frobavg::preset("qi");
    gp.taus[1].c_size = 5;  // more order-2 elements than the group holds
    CHECK_THROWS_AS(gp.validate(), frobavg::ProfileError);

    gp = frobavg::preset("qi");
    gp.defining_poly = {1, 0, 0};  // wrong degree
    CHECK_THROWS_AS(gp.validate(), frobavg::ProfileError);
}

TEST_CASE("phi_K on multiples of the conductor") {
    auto qi = frobavg::preset("qi");
    CHECK(frobavg::phi_K(qi, 4) == 1);    // phi(4)/2
    CHECK(frobavg::phi_K(qi, 8) == 2);    // phi(8)/2
    CHECK(frobavg::phi_K(qi, 12) == 2);   // phi(12)/2
    CHECK(frobavg::phi_K(qi, 20) == 4);
    CHECK_THROWS_AS((void)frobavg::phi_K(qi, 6), std::invalid_argument);

    auto e = frobavg::preset("qsqrt-3");
    CHECK(frobavg::phi_K(e, 3) == 1);
    CHECK(frobavg::phi_K(e, 9) == 3);
}

TEST_CASE("frobenius_degree matches splitting theory in Q(i)") {
    auto qi = frobavg::preset("qi");
    frobavg::PrimeTable table(500);
    for (u64 p : table.primes) {
        if (qi.is_ramified(p)) continue;
        int expect = (p % 4 == 3) ? 2 : 1;
        INFO("p=", p);
        CHECK(frobavg::frobenius_degree(qi, p) == expect);
    }
}

TEST_CASE("frobenius_degree matches splitting theory in Q(sqrt(-3))") {
    auto e = frobavg::preset("qsqrt-3");
    frobavg::PrimeTable table(500);
    for (u64 p : table.primes) {
        if (e.is_ramified(p)) continue;
        int expect = (p % 3 == 2) ? 2 : 1;
        INFO("p=", p);
        CHECK(frobavg::frobenius_degree(e, p) == expect);
    }
}

TEST_CASE("frobenius_degree in the sextic field keys on cubes mod p") {
    auto s = frobavg::preset("s3x3m2");
    frobavg::PrimeTable table(500);
    for (u64 p : table.primes) {
        if (s.is_ramified(p)) continue;
        int expect = (p % 3 == 2) ? 2 : (is_cube_mod(2, p) ? 1 : 3);
        INFO("p=", p);
        CHECK(frobavg::frobenius_degree(s, p) == expect);
    }
}

TEST_CASE("tau_of_prime picks the congruence class") {
    auto qi = frobavg::preset("qi");
    CHECK(frobavg::tau_of_prime(qi, 5) == std::size_t{0});
    CHECK(frobavg::tau_of_prime(qi, 7) == std::size_t{1});
    auto e = frobavg::preset("qsqrt-3");
    CHECK(frobavg::tau_of_prime(e, 7) == std::size_t{0});
    CHECK(frobavg::tau_of_prime(e, 5) == std::size_t{1});
}

TEST_CASE("validate_pretentious finds nothing on the presets") {
    for (const char* name : {"qi", "qsqrt-3", "s3x3m2"}) {
        auto rep = frobavg::validate_pretentious(frobavg::preset(name), 2000);
        INFO("preset=", name);
        CHECK(rep.p_limit == 2000);
        CHECK(rep.checked > 250);
        CHECK(rep.violations.empty());
    }
}

TEST_CASE("validate_pretentious flags a profile with a wrong tau") {
    auto gp = frobavg::preset("qi");
    // Swap the congruence classes: claims p = 1 (mod 4) is the inert class.
    gp.taus[0].S = {3};
    gp.taus[1].S = {1};
    gp.validate();  // structurally fine, arithmetically wrong
    auto rep = frobavg::validate_pretentious(gp, 200);
    CHECK_FALSE(rep.violations.empty());
}

TEST_CASE("load_profile round-trips a preset") {
    std::string body = R"({
  "name": "qi-file",
  "m_K": 4,
  "n_K": 2,
  "n_Kprime": 2,
  "defining_poly": [1, 0],
  "taus": [
    {"order": 1, "S": [1], "c_size": 0},
    {"order": 2, "S": [3], "c_size": 1}
  ],
  "ramified_primes": [2]
})";
    auto path = write_temp_profile(body, "frobavg_profile_ok.json");
    auto gp = frobavg::load_profile(path);
    CHECK(gp.name == "qi-file");
    CHECK(gp.m_K == 4);
    CHECK(gp.taus[1].c_size == 1);
    CHECK(frobavg::frobenius_degree(gp, 7) == 2);
    std::remove(path.c_str());
}

TEST_CASE("load_profile reports the offending field") {
    std::string body = R"({
  "name": "broken",
  "m_K": 4,
  "n_K": 2,
  "n_Kprime": 2,
  "defining_poly": [1, 0],
  "taus": [
    {"order": 1, "S": [1], "c_size": 0},
    {"order": 2, "S": [3], "c_size": 1}
  ]
})";
    auto path = write_temp_profile(body, "frobavg_profile_missing.json");
    try {
        (void)frobavg::load_profile(path);
        FAIL("expected ProfileError");
    } catch (const frobavg::ProfileError& e) {
        CHECK(std::string(e.what()).find("ramified_primes") != std::string::npos);
    }
    std::remove(path.c_str());

    CHECK_THROWS_AS((void)frobavg::load_profile("/tmp/frobavg_no_such.json"),
                    frobavg::ProfileError);
}

}  // TEST_SUITE
