// lfun: truncated evaluation of L(1, chi_d) with an explicit tail bound.
//
//   L(1, chi_d) = sum_{n>=1} chi_d(n)/n,   chi_d = Kronecker symbol (d/.)
//
// The reported bound is Polya-Vinogradov style: any interval sum of chi_d is
// at most PV(d) = sqrt(|d|) ln|d| in absolute value (valid for primitive
// characters and, by the divisor-unfolding of the principal part, for
// imprimitive chi_d as well since f * 2^{omega(f)} <= f^2 and ln grows), so by
// Abel summation |sum_{n>y} chi_d(n)/n| <= PV(d)/y.  The partial sum itself
// is exact up to double rounding: compensated summation in ascending n.
//
// l_one starts at y = ceil(PV(d) / rel_err_target) (sufficient when the
// value is near 1) and doubles y until tail_bound <= rel_err_target times
// the certified lower bound max(|value| - tail_bound, L_floor), with the
// crude positivity floor L_floor = 1/(2 ln|d|).  The hard guarantee is
// always |value - L(1,chi_d)| <= tail_bound regardless of how y was chosen.

#pragma once

#include "frobavg/arith.hpp"

namespace frobavg {

struct LValue {
    i64 d = 0;
    u64 y = 0;
    double value = 0.0;
    double tail_bound = 0.0;  // PV(d)/y
};

// Exact integer S_d(y) = sum_{n <= y, gcd(n, modulus_filter) = 1} chi_d(n).
i64 char_partial_sum(i64 d, u64 y, u64 modulus_filter = 1);

// Partial sum at an explicit truncation length.
LValue l_at(i64 d, u64 y);

// Truncation length chosen from rel_err_target as above.
LValue l_one(i64 d, double rel_err_target);

}  // namespace frobavg
