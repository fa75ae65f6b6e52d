#include "frobavg/constant.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "frobavg/localfac.hpp"
#include "frobavg/parallel.hpp"

namespace frobavg {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

using u32 = unsigned int;

// smallest-prime-factor sieve for fast factorization of the n loop
std::vector<u32> spf_sieve(u64 limit) {
    std::vector<u32> spf(limit + 1, 0);
    for (u64 i = 2; i <= limit; ++i) {
        if (spf[i] == 0) {
            for (u64 j = i; j <= limit; j += i)
                if (spf[j] == 0) spf[j] = u32(i);
        }
    }
    return spf;
}

// Euler phi sieve
std::vector<u64> phi_sieve(u64 limit) {
    std::vector<u64> phi(limit + 1);
    std::iota(phi.begin(), phi.end(), u64(0));
    for (u64 i = 2; i <= limit; ++i) {
        if (phi[i] == i) {  // prime
            for (u64 j = i; j <= limit; j += i) phi[j] -= phi[j] / i;
        }
    }
    return phi;
}

// Kronecker tables chi(c | ell) for odd primes up to a memory-bounded limit
// (quadratic storage); larger primes fall back to the generic symbol.
struct ChiTables {
    u64 tabled_limit;
    std::vector<size_t> off;
    std::vector<signed char> val;

    explicit ChiTables(const std::vector<u32>& spf) {
        u64 limit = spf.size() - 1;
        tabled_limit = std::min<u64>(limit, 20000);
        off.assign(tabled_limit + 1, 0);
        size_t total = 0;
        for (u64 p = 3; p <= tabled_limit; ++p)
            if (spf[p] == p) {
                off[p] = total;
                total += p;
            }
        val.assign(total, -1);
        for (u64 p = 3; p <= tabled_limit; ++p) {
            if (spf[p] != p) continue;
            signed char* row = val.data() + off[p];
            row[0] = 0;
            for (u64 s = 1; s < p; ++s) row[s * s % p] = 1;
        }
    }

    int at(u64 ell, u64 c) const {
        if (ell <= tabled_limit) return val[off[ell] + c];
        return kronecker(i64(c), ell);
    }
};

double ell_main_factor(u64 ell) {
    double l = double(ell);
    double chi = (ell % 4 == 1) ? 1.0 : -1.0;  // chi(-1 | ell)
    return l * (l - 1 - chi) / ((l - 1) * (l - chi));
}

// product over primes dividing |r| of ell/(ell - chi(-1|ell))
double r_prefactor(i64 r) {
    u64 abs_r = u64(r < 0 ? -r : r);
    double prod = 1.0;
    for (auto [ell, e] : factorize(abs_r).factors) {
        (void)e;
        if (ell == 2) continue;  // r is odd; defensive
        double chi = (ell % 4 == 1) ? 1.0 : -1.0;
        prod *= double(ell) / (double(ell) - chi);
    }
    return prod;
}

void check_r_and_g(const GaloisProfile& profile, i64 r, u64 g) {
    if (r % 2 == 0) throw std::invalid_argument("r must be odd");
    if (std::gcd(g, profile.m_K) != 1)
        throw std::invalid_argument("g must be a unit mod m_K");
}

// Per-prime data for the primes dividing m_K * k^2 (the "outer" primes whose
// local factor does not depend on a when the prime misses n).
struct OuterPrime {
    u64 ell;
    u64 fixed_count;  // count with n exactly 1 (same as any n with ell !| n)
};

}  // namespace

SeriesValue c_g_series(const GaloisProfile& profile, i64 r, u64 g, u64 U, u64 V,
                       unsigned threads) {
    check_r_and_g(profile, r, g);
    if (U < 2 || V < 2) throw std::invalid_argument("U and V must be >= 2");
    if (U > 2000000)
        throw std::invalid_argument("U beyond desk scale (max 2e6)");
    u64 abs_r = u64(r < 0 ? -r : r);
    u64 two_r = 2 * abs_r;
    u64 m_K = profile.m_K;

    std::vector<u32> spf = spf_sieve(U);
    std::vector<u64> phi = phi_sieve(U);
    ChiTables chi(spf);

    std::vector<u64> ks;
    for (u64 k = 1; k <= V; ++k)
        if (std::gcd(k, two_r) == 1) ks.push_back(k);

    u64 r2 = u64(i64(abs_r) * i64(abs_r));

    std::vector<double> per_k = parallel_map<double>(
        ks.size(), threads, [&](size_t idx) -> double {
            u64 k = ks[idx];
            u64 k2 = k * k;

            // primes of m_K * k^2 and their a-independent local counts
            std::vector<OuterPrime> outer;
            u64 mk2 = m_K * k2;
            for (auto [ell, e] : factorize(mk2).factors) {
                (void)e;
                outer.push_back({ell, count_Cg_ell(r, 1, 1, k, m_K, g, ell)});
            }

            // phi(m_K * k^2) and the unit part X = m_K * k^2 for the
            // phi(n * X) = phi(n) * X * prod_{ell | X, ell !| n} (1 - 1/ell)
            // merge used inside the loop
            double acc = 0.0;
            for (u64 n = 1; n <= U; ++n) {
                if (std::gcd(n, two_r) != 1) continue;

                // factor n on the fly (spf) and build per-prime a-loop data
                struct InnerPrime {
                    u64 ell;
                    int e;
                    u64 k2_mod;    // k^2 mod ell (or mod ell^t below)
                    u64 r2_mod;    // r^2 mod ell
                    u64 ell_t;     // ell^t for the m_K-sharing case
                    u64 target;    // (r^2 - 4g^2) mod ell^t
                    u64 count_hit; // ell^t
                    bool shares_mk;
                    bool odd_e;
                };
                InnerPrime inner[8];
                int n_inner = 0;
                {
                    u64 m = n;
                    while (m > 1) {
                        u64 ell = spf[m];
                        int e = 0;
                        while (m % ell == 0) {
                            m /= ell;
                            ++e;
                        }
                        InnerPrime ip;
                        ip.ell = ell;
                        ip.e = e;
                        ip.odd_e = (e % 2 == 1);
                        if (m_K % ell == 0) {
                            ip.shares_mk = true;
                            int M = nu(ell, i64(m_K));
                            int E = e + 2 * nu(ell, i64(k));
                            int t = std::min(E, M);
                            u64 ell_t = 1;
                            for (int i = 0; i < t; ++i) ell_t *= ell;
                            ip.ell_t = ell_t;
                            ip.count_hit = ell_t;
                            ip.k2_mod = k2 % ell_t;
                            i128 tgt = (i128(r) * r - 4 * i128(g) * g) % i128(ell_t);
                            if (tgt < 0) tgt += i128(ell_t);
                            ip.target = u64(tgt);
                            ip.r2_mod = 0;  // unused
                        } else {
                            ip.shares_mk = false;
                            ip.k2_mod = k2 % ell;
                            ip.r2_mod = r2 % ell;
                            ip.ell_t = ell;
                            ip.target = 0;
                            ip.count_hit = 0;
                        }
                        inner[n_inner++] = ip;
                    }
                }

                // a-independent product over primes of m_K k^2 not dividing n
                i64 pre = 1;
                for (const OuterPrime& op : outer) {
                    if (n % op.ell == 0) continue;
                    pre *= i64(op.fixed_count);
                    if (pre == 0) break;
                }
                if (pre == 0) continue;

                // phi_K(m_K n k^2)
                u64 phi_m = phi[n] * mk2;
                for (const OuterPrime& op : outer)
                    if (n % op.ell == 0) {
                        // prime shared with n: keep full power of X
                    } else {
                        phi_m = phi_m / op.ell * (op.ell - 1);
                    }
                u64 phiK = phi_m / profile.n_Kprime;

                // literal a-loop
                i64 inner_sum = 0;
                if (n == 1) {
                    inner_sum = 1;
                } else {
                    for (u64 a = 1; a < n; ++a) {
                        i64 term = 1;
                        for (int i = 0; i < n_inner; ++i) {
                            const InnerPrime& ip = inner[i];
                            u64 am = a % ip.ell;
                            if (!ip.shares_mk) {
                                if (am == 0) {
                                    term = 0;
                                    break;
                                }
                                u64 c = (ip.r2_mod + ip.ell - am * ip.k2_mod % ip.ell) % ip.ell;
                                if (c == 0) {
                                    term = 0;
                                    break;
                                }
                                int chi_c = chi.at(ip.ell, c);
                                if (ip.odd_e) term *= chi.at(ip.ell, am);
                                term *= 1 + chi_c;
                                if (term == 0) break;
                            } else {
                                if (am == 0) {
                                    term = 0;
                                    break;
                                }
                                if (a % ip.ell_t * ip.k2_mod % ip.ell_t != ip.target) {
                                    term = 0;
                                    break;
                                }
                                if (ip.odd_e) term *= chi.at(ip.ell, am);
                                term *= i64(ip.count_hit);
                            }
                        }
                        inner_sum += term;
                    }
                }
                if (inner_sum == 0) continue;
                acc += double(pre) * double(inner_sum) / (double(n) * double(phiK));
            }
            return acc / double(k);
        });

    double total = 0.0;
    for (double v : per_k) total += v;
    double err = 10.0 * (1.0 / std::sqrt(double(U)) +
                         std::log(double(V)) / (double(V) * double(V)));
    return {total, err};
}

SeriesValue c_g_product(const GaloisProfile& profile, i64 r, u64 g, u64 ell_max) {
    check_r_and_g(profile, r, g);
    if (ell_max < 3) throw std::invalid_argument("ell_max must be >= 3");
    u64 abs_r = u64(r < 0 ? -r : r);
    u64 m_K = profile.m_K;

    double value = double(profile.n_Kprime) / double(euler_phi(m_K));

    PrimeTable table(ell_max);
    for (u64 ell : table.primes) {
        if (ell == 2) continue;
        if (abs_r % ell == 0 || m_K % ell == 0) continue;
        value *= ell_main_factor(ell);
    }
    for (auto [ell, e] : factorize(m_K).factors) {
        (void)e;
        if (ell == 2 || abs_r % ell == 0) continue;
        value *= kappa_factor(r, g, ell, m_K).to_double();
    }
    double err = std::fabs(value) * (std::exp(4.0 / double(ell_max)) - 1.0);
    return {value, err};
}

ConstantBreakdown constant_full(const GaloisProfile& profile, i64 r,
                                const std::string& route, u64 U, u64 V,
                                u64 ell_max, unsigned threads) {
    if (route != "series" && route != "product")
        throw std::invalid_argument("route must be 'series' or 'product'");
    if (r % 2 == 0) throw std::invalid_argument("r must be odd");

    ConstantBreakdown out;
    out.field = profile.name;
    out.r = r;
    out.route = route;
    if (route == "series") {
        out.U = U;
        out.V = V;
    } else {
        out.ell_max = ell_max;
    }

    double pref_r = r_prefactor(r);
    double scale = double(profile.n_K) / kTwoPi;

    double total = 0.0;
    double total_err = 0.0;
    bool any_contribution = false;
    for (const TauClass& tau : profile.taus) {
        double tau_value = 0.0;
        if (tau.c_size > 0) {
            any_contribution = true;
            double coeff = 2.0 * double(tau.c_size) / (3.0 * double(profile.n_K));
            double g_sum = 0.0;
            double g_err = 0.0;
            for (u64 g : tau.S) {
                SeriesValue sv = (route == "series")
                                     ? c_g_series(profile, r, g, U, V, threads)
                                     : c_g_product(profile, r, g, ell_max);
                out.per_g.push_back({g, sv.value});
                g_sum += sv.value;
                g_err += sv.err;
            }
            tau_value = coeff * pref_r * g_sum;
            total_err += scale * coeff * pref_r * g_err;
        }
        out.per_tau.push_back({tau.order, tau.c_size, tau_value});
        total += tau_value;
    }
    out.value = scale * total;
    out.trunc_error = total_err;
    out.warning_no_order2 = !any_contribution;
    return out;
}

double constant_simplified(const GaloisProfile& profile, i64 r, u64 ell_max) {
    if (r % 2 == 0) throw std::invalid_argument("r must be odd");
    u64 abs_r = u64(r < 0 ? -r : r);
    for (auto [ell, e] : factorize(profile.m_K).factors) {
        (void)e;
        if (ell != 2 && abs_r % ell != 0)
            throw std::invalid_argument(
                "precondition failed: odd prime " + std::to_string(ell) +
                " divides m_K but not r");
    }
    u64 c_total = 0;
    for (const TauClass& tau : profile.taus) c_total += tau.c_size;

    double value = double(c_total) / (3.0 * M_PI);
    i64 neg_r2 = -i64(abs_r) * i64(abs_r);
    PrimeTable table(ell_max);
    for (u64 ell : table.primes) {
        if (ell == 2) continue;
        double l = double(ell);
        double chi_r = double(kronecker(neg_r2, ell));
        double chi_1 = (ell % 4 == 1) ? 1.0 : -1.0;
        value *= l * (l - 1 - chi_r) / ((l - 1) * (l - chi_1));
    }
    return value;
}

Rational constant_supersingular(const GaloisProfile& profile) {
    u64 c_total = 0;
    for (const TauClass& tau : profile.taus) c_total += tau.c_size;
    return Rational(i64(c_total), 12 * i64(profile.n_K));
}

}  // namespace frobavg
