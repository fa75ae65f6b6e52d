#pragma once

// Local solution counts and multiplicative local factors behind the
// degree-two average constant:
//
//   count_Cg_*  : #C_g(r,a,n,k), the count of residues b mod m_K*n*k^2 that
//                 are units and satisfy 4b^2 = r^2 - a*k^2 (mod n*k^2) and
//                 b = g (mod m_K); *_brute enumerates, *_ell is the per-prime
//                 closed form (the full count is the CRT product over
//                 ell | m_K*n*k^2).
//   c_k_*       : the character-twisted sums c_k(n) over a in (Z/n)^x with
//                 gcd(r^2 - a k^2, n) = 1; multiplicative in n, with closed
//                 forms on prime powers.
//   kappa_factor: the three-case per-prime factor at ell | m_K in the Euler
//                 product form of the constant.
//   F0 / F1_g   : the per-prime building blocks used when the double sum over
//                 (n, k) is refactored as an Euler product.
//
// Everything here is exact (integers and rationals); the floating-point
// assembly happens one layer up.

#include <optional>

#include "frobavg/arith.hpp"
#include "frobavg/rational.hpp"

namespace frobavg {

// Exact count of b in (Z/m_K*n*k^2)^x with 4b^2 = r^2 - a*k^2 (mod n*k^2)
// and b = g (mod m_K), by enumeration over the full residue ring.
// pre: r odd, gcd(nk, 2r) = 1, gcd(g, m_K) = 1, a a unit mod n.
u64 count_Cg_brute(i64 r, u64 a, u64 n, u64 k, u64 m_K, u64 g);

// Per-prime closed form for the local count at ell | m_K*n*k^2:
//   ell not dividing m_K : 1 + chi(r^2 - a k^2 | ell), or 0 when
//                          ell | r^2 - a k^2 (a unit square has unit halves);
//   ell | m_K            : ell^t with t = min(nu_ell(n k^2), nu_ell(m_K))
//                          when 4g^2 = r^2 - a k^2 (mod ell^t), else 0.
u64 count_Cg_ell(i64 r, u64 a, u64 n, u64 k, u64 m_K, u64 g, u64 ell);

// c_k(n) for n = ell^e by the three-branch closed form (value scaled back by
// ell^{e-1} so the return is c_k(ell^e) itself, always an integer):
//   ell not dividing k*m_K        : ell^{e-1} * (ell-3)           (e even)
//                                   ell^{e-1} * -(1 + chi(-1|ell)) (e odd)
//   ell | k*m_K, nu(m_K) <= 2nu(k): ell^{e-1} * #C * (ell-1 / 0)  (even/odd)
//   2nu(k) < nu(m_K)              : ell^{e-1} * #C *
//                                   chi((r^2-4g^2)/ell^{2nu(k)}|ell)^e * ell
// where #C = count_Cg_ell(r, 1, 1, k, m_K, g, ell).
// pre: ell odd prime, ell not dividing 2r, gcd(k, 2r) = 1, e >= 1.
i64 c_k_closed(i64 r, u64 k, u64 ell, int e, u64 m_K, u64 g);

// c_k(n) = sum over a in (Z/n)^x with gcd(r^2 - a k^2, n) = 1 of
// chi(a|n) * prod_{ell | n} count_Cg_ell(r, a, n, k, m_K, g, ell),
// by enumeration over a.  pre: gcd(n, 2r) = 1, gcd(k, 2r) = 1.
i64 c_k_brute(i64 r, u64 k, u64 n, u64 m_K, u64 g);

// The per-prime factor at ell | m_K, ell not dividing 2r, in the Euler
// product for the constant.  With mu = nu_ell(m_K) and D = 4g^2 - r^2
// (g lifted to its least nonnegative representative):
//   case 3 (ell^mu | D, i.e. 4g^2 = r^2 mod ell^mu; any such representative):
//     (ell^{2c+1}(ell+1)(ell^c - 1) + ell^{mu+2}) / (ell^{3c}(ell^2 - 1)),
//     c = ceil(mu/2);
//   case 1 (nu = nu_ell(D) < mu, nu odd):
//     (ell^{(nu+1)/2} - 1) / (ell^{(nu-1)/2}(ell - 1));
//   case 2 (nu < mu, nu even):
//     (ell^{nu/2+1} - 1) / (ell^{nu/2}(ell - 1))
//       + chi(-D/ell^nu | ell) / (ell^{nu/2}(ell - chi(-D/ell^nu | ell))).
Rational kappa_factor(i64 r, u64 g, u64 ell, u64 m_K);

// F0(ell) = 1 - (chi(-1|ell)*ell + 3) / ((ell-1)^2 (ell+1)), ell odd prime.
Rational F0(u64 ell);

// Two-case per-prime factor for ell | m_K*k, ell odd, ell not dividing 2r:
//   2nu(k) <  nu(m_K) and 4g^2 = r^2 (mod ell^{2nu(k)}):
//     1 + chi(q|ell)/(ell - chi(q|ell)) with q = (r^2-4g^2)/ell^{2nu(k)};
//   2nu(k) >= nu(m_K) and 4g^2 = r^2 (mod ell^{nu(m_K)}):
//     1 + 1/(ell(ell+1)).
// Returns nullopt when neither congruence holds (the zero-contribution case:
// every term with this ell | k vanishes).
std::optional<Rational> F1_g(u64 ell, u64 k, i64 r, u64 g, u64 m_K);

}  // namespace frobavg
