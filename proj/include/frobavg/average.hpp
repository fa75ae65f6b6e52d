#pragma once
// Empirical sides of the average-distribution identities.
//
// Throughout, K is described by a GaloisProfile and "degree-2 prime" means an
// unramified rational prime p whose Frobenius has residue degree 2, checked
// honestly by polynomial factorization (frobenius_degree), never by the
// congruence shortcut.
//
// theta_sum    theta(x; tau, q, a) = sum of log p over degree-2 primes p <= x
//              with tau_of_prime(p) = tau and p = a (mod q*m_K).
// bdh_error    Barban-Davenport-Halberstam style average square error: cells
//              (q, a) for q <= Q and a coprime to q*m_K compatible with S_tau
//              mod m_K; expected mass per cell is
//                  #C_tau * x / (phi_K(q*m_K) * n_K),
//              and error_sum = sum (theta - expected)^2 over the cells.
// A_series     A(T; r) = sum over k coprime to 2r and degree-2 primes
//              3|r| < p <= T with k^2 | r^2 - 4p^2 of
//                  L(1, chi_{(r^2-4p^2)/k^2}) * log(p) / k,
//              evaluated by walking square divisors of r^2 - 4p^2 (the k-scan
//              to 2T would be quadratic; every qualifying k satisfies
//              k <= sqrt(4p^2 - r^2) < 2T automatically).
// class_sum    (n_K/2) * sum over degree-2 primes 3|r| < p <= sqrt(x) of
//              H(r^2 - 4p^2) / p^2, the class-number route to the average;
//              grows like C * loglog x where C is the full constant.
// box_average  direct simulation over an imaginary-quadratic ring O_K with
//              integral basis {1, omega}: every model y^2 = x^3 + alpha*x +
//              beta with coordinates in a box (singular ones excluded) is
//              reduced mod each inert prime p <= sqrt(x) (p > 3, so the
//              short Weierstrass form survives) and its trace over F_{p^2}
//              is looked up; the report averages the per-model counts of
//              trace = r.  Two interchangeable engines: a per-p trace table
//              built through the twist orbit w = a^3/b^2 (trace(a,b) =
//              chi2(ab) * trace(w,w) plus separate a = 0 / b = 0 tables), and
//              a naive per-curve character-sum oracle sharing no tables.
//
// Reduction maps: for m_K = 4 (Gaussian ring) p = 3 (mod 4) is inert and
// F_{p^2} is built as F_p[t]/(t^2+1), so i -> t is coordinatewise.  For
// m_K = 3 (Eisenstein ring) p = 2 (mod 3) is inert; omega = (1+sqrt(-3))/2
// maps to (1 + c*t)/2 where c^2 = -3/u mod p (Tonelli-Shanks, canonical
// smaller root -- the choice of root picks one of the two conjugate primes
// and the trace is invariant under conjugation).

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "frobavg/arith.hpp"
#include "frobavg/galois.hpp"

namespace frobavg {

// ---------------------------------------------------------------------------
// theta sums and the BDH error
// ---------------------------------------------------------------------------

// The degree-2 primes p <= x with tau_of_prime(p) = tau_index and
// p = a (mod q*m_K), ascending.  pre: q >= 1, 1 <= a <= q*m_K.
std::vector<u64> theta_primes(const GaloisProfile& profile, u64 x,
                              std::size_t tau_index, u64 q, u64 a);

// Sum of natural log p over theta_primes (empty sum = 0).
double theta_sum(const GaloisProfile& profile, u64 x, std::size_t tau_index,
                 u64 q, u64 a);

struct BdhCell {
    u64 q = 0;
    u64 a = 0;
    double theta = 0;
    double expected = 0;
};

struct BdhReport {
    u64 x = 0;
    u64 Q = 0;
    std::size_t tau_index = 0;
    std::vector<BdhCell> cells;  // ordered by (q, a)
    double error_sum = 0;
};

BdhReport bdh_error(const GaloisProfile& profile, u64 x, u64 Q,
                    std::size_t tau_index, unsigned threads = 1);

// ---------------------------------------------------------------------------
// averages
// ---------------------------------------------------------------------------

struct GridPoint {
    double x = 0;  // x or T
    double empirical = 0;
};

struct AverageReport {
    std::string kind;  // "A_series", "class_sum", "box"
    std::vector<GridPoint> grid;
    double predicted_slope = 0;
    // difference quotient minus predicted slope, per consecutive grid pair
    std::vector<double> fit_residuals;
};

// A(T; r) with L-values at relative error l_rel_err.  pre: r odd, T >= 2.
double A_series(const GaloisProfile& profile, i64 r, u64 T, double l_rel_err,
                unsigned threads = 1);

// A_series over an ascending T grid; predicted_slope = (2pi/n_K) * C, the
// slope of A(T) ~ c' T.
AverageReport a_series_report(const GaloisProfile& profile, i64 r,
                              const std::vector<u64>& T_grid, double l_rel_err,
                              unsigned threads = 1);

// Class-number route over an ascending x grid; predicted_slope = C (full
// constant, product route), matching the C * loglog x law.
AverageReport class_sum_average(const GaloisProfile& profile, i64 r,
                                const std::vector<u64>& x_grid,
                                unsigned threads = 1);

// ---------------------------------------------------------------------------
// box simulator
// ---------------------------------------------------------------------------

struct BoxBounds {
    std::array<u64, 2> A{0, 0};  // coordinate bounds for alpha over {1, omega}
    std::array<u64, 2> B{0, 0};  // coordinate bounds for beta
};

enum class BoxMethod { trace_table, per_curve };

struct BoxCount {
    u64 p = 0;
    u64 hits = 0;  // models in the box with reduced trace = r at p
};

struct BoxRun {
    std::vector<BoxCount> per_prime;  // ascending p
    u64 model_count = 0;              // #C, nonsingular models in the box
    double average = 0;               // sum hits / model_count
    u64 min_coordinate = 0;           // smallest box bound entry (informational)
};

// pre: profile is imaginary quadratic (n_K = 2, m_K in {3,4}); every bound
// >= 1; x <= 10^4.  errors: empty box after removing singular models.
BoxRun box_run(const GaloisProfile& profile, i64 r, const BoxBounds& bounds,
               u64 x, unsigned threads = 1,
               BoxMethod method = BoxMethod::trace_table);

// Wraps box_run into a report; predicted_slope = C (product route).
AverageReport box_average(const GaloisProfile& profile, i64 r,
                          const BoxBounds& bounds, u64 x, unsigned threads = 1,
                          BoxMethod method = BoxMethod::trace_table);

}  // namespace frobavg
