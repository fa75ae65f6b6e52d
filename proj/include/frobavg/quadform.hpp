// quadform: class numbers of imaginary quadratic orders by reduced-form
// enumeration, and the Hurwitz-Kronecker class number
//
//   H(D) = sum over k with k^2 | D and D/k^2 = 0,1 (mod 4) of
//          h(D/k^2) / w(D/k^2),
//
// where h counts reduced *primitive* forms (a,b,c), b^2-4ac = d, |b| <= a <= c
// (b >= 0 when |b| = a or a = c) and w = 6, 4, 2 for d = -3, -4, otherwise.
// Note the weights are 1/w, half the classical Hurwitz normalization; this is
// the normalization the Deuring mass identity in the curves module needs.
//
// Everything here is exact rational arithmetic; no floating point.

#pragma once

#include <utility>
#include <vector>

#include "frobavg/arith.hpp"
#include "frobavg/rational.hpp"

namespace frobavg {

struct ClassNumberResult {
    i64 h = 0;  // reduced primitive form count
    int w = 2;  // unit group order: 6 (d=-3), 4 (d=-4), else 2
};

// h(d), w(d) for a negative discriminant d = 0,1 (mod 4).  Throws on invalid d.
ClassNumberResult class_number(i64 d);

struct HurwitzTerm {
    u64 k;
    i64 h;
    int w;
};

struct HurwitzValue {
    i64 D = 0;
    Rational value;                  // sum of h/w over terms; denominator | 12
    std::vector<HurwitzTerm> terms;  // ascending k
};

HurwitzValue hurwitz(i64 D);

// scr-H(T) = sum over primes 3|r| < p <= T of H(r^2 - 4 p^2), exact.
Rational hurwitz_sum(u64 T, i64 r, unsigned threads = 1);

}  // namespace frobavg
