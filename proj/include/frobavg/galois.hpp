// galois: finite splitting data of a Galois number field K/Q.
//
// A profile carries exactly what the average-constant formulas consume:
//   m_K      - least conductor with K' (the maximal abelian subfield) inside
//              Q(zeta_{m_K})
//   n_K      - [K:Q],  n_Kprime - [K':Q]
//   taus     - restriction classes tau of Gal(K'/Q) of order <= 2, each with
//              S_tau (the residues mod m_K cutting tau out, one coset of size
//              phi(m_K)/n_Kprime) and c_size = #C_tau (order-two elements of
//              Gal(K/Q) restricting to tau)
//   defining_poly - monic integer polynomial of degree n_K; the degree-f
//              pattern of its factorization mod p computes f_K(p)
//   ramified_primes - excluded from every sum (must cover m_K and the
//              polynomial discriminant)
//
// f_K(p) = 2 means p factors in K as a product of degree-two prime ideals;
// for 2-pretentious K this is equivalent to a congruence on p mod m_K, and
// validate_pretentious checks that biconditional on both routes.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frobavg/arith.hpp"

namespace frobavg {

struct ProfileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TauClass {
    int order = 1;           // 1 or 2
    std::vector<u64> S;      // residues mod m_K, ascending, coprime to m_K
    u64 c_size = 0;          // #C_tau
};

struct GaloisProfile {
    std::string name;
    u64 m_K = 1;
    u64 n_K = 1;
    u64 n_Kprime = 1;
    std::vector<i64> defining_poly;  // constant term first; leading 1 implied
    std::vector<TauClass> taus;
    std::vector<u64> ramified_primes;  // ascending

    bool is_ramified(u64 p) const;
    // throws ProfileError on any invariant violation
    void validate() const;
};

// Built-in profiles: "qi" = Q(i), "qsqrt-3" = Q(sqrt(-3)), "s3x3m2" = the
// degree-6 splitting field of x^3 - 2.  Throws ProfileError on unknown names.
GaloisProfile preset(const std::string& name);

// Loads and validates a JSON profile; error messages carry the offending
// field and (best effort) its line in the file.
GaloisProfile load_profile(const std::string& path);

// phi_K(q) = phi(q)/n_Kprime for m_K | q; the quotient must be integral.
u64 phi_K(const GaloisProfile& profile, u64 q);

// Common degree of the irreducible factors of defining_poly mod p
// (distinct-degree factorization); mixed degrees raise ProfileError.
int frobenius_degree(const GaloisProfile& profile, u64 p);

// The tau class with p mod m_K in S_tau, or nullopt (tau of order > 2).
std::optional<size_t> tau_of_prime(const GaloisProfile& profile, u64 p);

struct PretentiousViolation {
    u64 p;
    int frob_deg;
    int tau_order;  // 0 when no listed tau matches
    u64 c_size;
};

struct PretentiousReport {
    u64 p_limit = 0;
    u64 checked = 0;
    std::vector<PretentiousViolation> violations;
};

// Checks f_K(p) = 2  <=>  (tau_of_prime(p) has order 2 and c_size > 0)
// for every unramified p <= p_limit.
PretentiousReport validate_pretentious(const GaloisProfile& profile, u64 p_limit);

}  // namespace frobavg
