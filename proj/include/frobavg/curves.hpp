#pragma once
// Trace-of-Frobenius statistics for elliptic curves over F_{p^2}.
//
// For an odd prime p > 3 the quadratic extension is realised concretely as
//     F_{p^2} = F_p[t] / (t^2 - u),        u a quadratic non-residue mod p,
// with elements written c0 + c1*t.  The quadratic character of the extension
// field factors through the norm map:
//     chi2(v) = v^((p^2-1)/2) = (N(v))^((p-1)/2) = legendre_p(c0^2 - u*c1^2),
// which turns every character evaluation into one F_p Legendre lookup.
//
// For a nonsingular model  E_{a,b} : y^2 = x^3 + a x + b  (4a^3 + 27b^2 != 0)
// the number of affine points is sum_x (1 + chi2(x^3 + a x + b)), so the
// trace of Frobenius is
//     trace(a,b) = p^2 + 1 - #E(F_{p^2}) = - sum_x chi2(x^3 + a x + b).
//
// trace_histogram walks every one of the q^2 - q nonsingular models (q = p^2)
// and tallies model counts per trace value.  Two classical identities drive
// the downstream checks:
//   * each isomorphism class of curves contributes exactly (q-1)/#Aut models,
//     so  weighted(a) := models(a)/(q-1)  equals the class count with every
//     class weighted by 1/#Aut;
//   * (Deuring)  weighted(r) = H(r^2 - 4p^2)  for p not dividing r, where H is
//     the Hurwitz class number (quadform module).
// Together they also force  sum_a weighted(a) = (q^2-q)/(q-1) = p^2  exactly.
//
// Automorphism groups over F_{p^2} are uniform in p (> 3): p^2 = 1 (mod 12),
// so mu_6 and mu_4 are always rational and #Aut is 6 for a = 0 (j = 0),
// 4 for b = 0 (j = 1728) and 2 otherwise.
//
// All rationals are exact; histogram denominators divide 12 after reduction.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "frobavg/arith.hpp"
#include "frobavg/rational.hpp"

namespace frobavg {

// The field F_{p^2} = F_p[t]/(t^2 - u).  Desk-scale: p < 2^20 so that all
// coordinate products fit comfortably in 64 bits without mulmod.
struct Fp2 {
    u64 p = 0;
    u64 u = 0;  // verified quadratic non-residue mod p

    struct Elt {
        u64 c0 = 0, c1 = 0;  // c0 + c1 * t
    };

    // p must be a prime in (3, 2^20).  If nonresidue is given it is verified;
    // otherwise the least non-residue >= 2 is used.
    explicit Fp2(u64 p_, std::optional<u64> nonresidue = std::nullopt);

    Elt make(i64 c0, i64 c1) const;  // reduces signed coordinates mod p

    bool is_zero(Elt v) const { return v.c0 == 0 && v.c1 == 0; }
    bool eq(Elt v, Elt w) const { return v.c0 == w.c0 && v.c1 == w.c1; }

    Elt add(Elt v, Elt w) const;
    Elt sub(Elt v, Elt w) const;
    Elt neg(Elt v) const;
    Elt mul(Elt v, Elt w) const;
    Elt sqr(Elt v) const { return mul(v, v); }
    Elt scale(u64 s, Elt v) const;  // s in [0,p) times v
    Elt inv(Elt v) const;           // throws std::invalid_argument on 0

    u64 norm(Elt v) const;  // c0^2 - u*c1^2 mod p  (= v^(p+1))
    int chi2(Elt v) const { return legendre[norm(v)]; }

    // legendre[v] = (v/p) in {-1,0,1} for v in [0,p)
    std::vector<int> legendre;
};

// Trace of Frobenius of y^2 = x^3 + ax + b by direct character sum, O(p^2).
// Throws std::invalid_argument if the model is singular.
i64 trace_of(const Fp2& F, Fp2::Elt a, Fp2::Elt b);

// #Aut over F_{p^2}: 6 if a = 0, 4 if b = 0, else 2.  Throws on singular.
int aut_order(const Fp2& F, Fp2::Elt a, Fp2::Elt b);

struct TraceHistogram {
    u64 p = 0;
    std::map<i64, u64> models;  // trace -> number of models; absent = 0

    u64 model_count(i64 trace) const;
    Rational weighted(i64 trace) const;  // models(trace) / (p^2 - 1), exact
    Rational weighted_total() const;     // sum over all traces (= p^2)
};

// Full-grid histogram over all (a,b) with 4a^3 + 27b^2 != 0.  O(p^6) worst
// case; refuses p > p_limit (default 37 keeps runs under a minute).
TraceHistogram trace_histogram(u64 p, unsigned threads = 1, u64 p_limit = 37);

// Restriction of a histogram to the supersingular traces {0, +-p, +-2p}.
TraceHistogram supersingular_slice(const TraceHistogram& h);

struct DeuringResult {
    u64 p = 0;
    i64 r = 0;
    Rational lhs;  // weighted model count at trace r
    Rational rhs;  // Hurwitz class number H(r^2 - 4p^2)
    bool equal = false;
};

// Exact check of weighted(r) = H(r^2 - 4p^2).  pre: p > 3 prime, p does not
// divide r, r^2 < 4p^2.  The histogram overload reuses a precomputed grid.
DeuringResult deuring_check(u64 p, i64 r, unsigned threads = 1);
DeuringResult deuring_check(const TraceHistogram& h, i64 r);

}  // namespace frobavg
