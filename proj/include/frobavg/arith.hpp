// arith: exact integer plumbing shared by every other module.
//
// Contents: deterministic 64-bit primality (Miller-Rabin with a fixed witness
// set), factorization (wheel trial division below 1e7, Pollard rho above),
// the Kronecker symbol (d/n) fully defined for all d and n >= 0, the l-adic
// valuation nu_l, Euler phi / omega / divisor enumeration, the multiplicative
// cutoff function kappa_N (kappa_N(l^e) = l when l does not divide N and e is
// odd, else 1), and an Eratosthenes prime table.
//
// All functions are pure; inputs beyond 64-bit magnitude are rejected.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace frobavg {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// ---------------------------------------------------------------------------
// modular helpers
// ---------------------------------------------------------------------------

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 mod);

// Deterministic Miller-Rabin, valid for every n < 2^64.
bool is_prime(u64 n);

// ---------------------------------------------------------------------------
// factorization
// ---------------------------------------------------------------------------

struct Factorization {
    u64 value = 1;
    std::vector<std::pair<u64, int>> factors;  // (prime, exponent), primes ascending

    u64 recompose() const;
};

// Wheel trial division up to 1e7, deterministic Pollard rho beyond.
Factorization factorize(u64 n);

// nu(l, m): exponent of the prime l in m (m != 0; sign ignored).
int nu(u64 ell, i64 m);

// kappa_N(n): multiplicative, kappa(l^e) = l iff l does not divide N and e odd.
u64 kappa(u64 N, u64 n);

u64 euler_phi(u64 n);
u64 euler_phi(const Factorization& f);
int omega(u64 n);
std::vector<u64> divisors(u64 n);             // ascending
std::vector<u64> divisors(const Factorization& f);

// ---------------------------------------------------------------------------
// Kronecker symbol
// ---------------------------------------------------------------------------

// (d/n) for any integer d and n >= 0.  (d/0) = 1 iff |d| = 1, else 0;
// (d/2) follows the +-1 mod 8 rule; completely multiplicative in n.
int kronecker(i64 d, u64 n);

// Square root of a mod an odd prime p (Tonelli-Shanks).  Returns the root in
// [0, p/2] (the smaller of the two) so callers get a canonical choice.
// Throws std::invalid_argument if a is a non-residue mod p.
u64 sqrt_mod(u64 a, u64 p);

// ---------------------------------------------------------------------------
// prime table
// ---------------------------------------------------------------------------

struct PrimeTable {
    u64 limit = 0;
    std::vector<u64> primes;  // every prime <= limit, ascending

    explicit PrimeTable(u64 limit_);
};

}  // namespace frobavg
