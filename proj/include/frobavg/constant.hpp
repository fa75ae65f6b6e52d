#pragma once

// Assembly of the degree-two average constant by two independent routes.
//
// Route "series": the literal truncated triple sum
//     c_g = sum_{k<=V} (1/k) sum_{n<=U} 1/(n*phi_K(m_K n k^2))
//           sum_{a in (Z/n)^x} chi(a|n) * #C_g(r,a,n,k),
// with #C_g evaluated per term as the product of per-prime closed-form
// counts over ell | m_K n k^2 (the moduli make enumeration hopeless, the
// per-prime factorization is exact).  Truncation error is reported as
// 10*(1/sqrt(U) + ln(V)/V^2), an explicit conservative envelope for the
// O(1/sqrt U + log V / V^2) tail.
//
// Route "product": the closed Euler product
//     c_g = (n_K'/phi(m_K)) * prod_{ell <= ell_max, ell !| 2r m_K}
//           ell(ell-1-chi(-1|ell)) / ((ell-1)(ell-chi(-1|ell)))
//           * prod_{ell | m_K, ell !| 2r} kappa_factor(ell),
// with tail error bounded by |value|*(exp(4/ell_max)-1).
//
// Both routes feed the same outer assembly
//     value = (n_K/2pi) * sum_tau (2*#C_tau/(3 n_K))
//             * prod_{ell|r} ell/(ell-chi(-1|ell)) * sum_{g in S_tau} c_g.

#include <string>
#include <vector>

#include "frobavg/galois.hpp"
#include "frobavg/rational.hpp"

namespace frobavg {

struct SeriesValue {
    double value;
    double err;
};

struct ConstantBreakdown {
    std::string field;  // profile name
    i64 r;
    std::string route;  // "series" or "product"
    struct TauPart {
        int order;
        u64 c_size;
        double value;  // this tau's full contribution before the n_K/2pi scale
    };
    struct GPart {
        u64 g;
        double value;  // c_g for this residue
    };
    std::vector<TauPart> per_tau;
    std::vector<GPart> per_g;
    double value;
    double trunc_error;
    u64 U = 0, V = 0, ell_max = 0;  // whichever the route used
    bool warning_no_order2 = false;
};

inline constexpr u64 kDefaultU = 10000;
inline constexpr u64 kDefaultV = 100;
inline constexpr u64 kDefaultEllMax = 100000;

// One residue's series value; parallel over k, deterministic reduction.
SeriesValue c_g_series(const GaloisProfile& profile, i64 r, u64 g, u64 U, u64 V,
                       unsigned threads = 1);

// Same residue by the Euler product.
SeriesValue c_g_product(const GaloisProfile& profile, i64 r, u64 g, u64 ell_max);

// Full assembly over taus and g.  route must be "series" or "product".
ConstantBreakdown constant_full(const GaloisProfile& profile, i64 r,
                                const std::string& route, u64 U = kDefaultU,
                                u64 V = kDefaultV, u64 ell_max = kDefaultEllMax,
                                unsigned threads = 1);

// Closed product valid when every odd prime dividing m_K divides r:
// (#C/3pi) * prod_{2<ell<=ell_max} ell(ell-1-chi(-r^2|ell)) /
//                                  ((ell-1)(ell-chi(-1|ell))).
double constant_simplified(const GaloisProfile& profile, i64 r, u64 ell_max = kDefaultEllMax);

// Density of supersingular degree-two reductions: #C/(12 n_K), exact.
Rational constant_supersingular(const GaloisProfile& profile);

}  // namespace frobavg
