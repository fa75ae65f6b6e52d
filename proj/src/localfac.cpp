#include "frobavg/localfac.hpp"

#include <numeric>
#include <stdexcept>

namespace frobavg {

namespace {

// r^2 - a*k^2 reduced into [0, mod), computed wide to dodge overflow
u64 rhs_mod(i64 r, u64 a, u64 k, u64 mod) {
    i128 rhs = i128(r) * r - i128(a) * k % mod * k;
    i128 m = i128(mod);
    rhs %= m;
    if (rhs < 0) rhs += m;
    return u64(rhs);
}

// 4g^2 - r^2 as a signed 128-bit value (g lifted to least nonnegative rep)
i128 big_D(i64 r, u64 g) { return 4 * i128(g) * g - i128(r) * r; }

int nu128(u64 ell, i128 v) {
    if (v == 0) throw std::invalid_argument("nu: valuation of zero is undefined");
    if (v < 0) v = -v;
    int e = 0;
    while (v % ell == 0) {
        v /= ell;
        ++e;
    }
    return e;
}

// chi(v / ell^drop | ell) where ell^drop | v exactly divides
int chi_shifted(u64 ell, i128 v, int drop) {
    for (int i = 0; i < drop; ++i) v /= i128(ell);
    i128 red = v % i128(ell);
    if (red < 0) red += i128(ell);
    return kronecker(i64(red), ell);
}

u64 pow_u64(u64 b, int e) {
    u64 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

void check_common(i64 r, u64 n, u64 k, u64 m_K, u64 g) {
    if (r % 2 == 0) throw std::invalid_argument("r must be odd");
    if (k == 0 || n == 0 || m_K == 0) throw std::invalid_argument("n, k, m_K must be positive");
    u64 abs_r = u64(r < 0 ? -r : r);
    if (std::gcd(n * k, 2 * abs_r) != 1)
        throw std::invalid_argument("nk must be coprime to 2r");
    if (std::gcd(g, m_K) != 1) throw std::invalid_argument("g must be a unit mod m_K");
}

}  // namespace

u64 count_Cg_brute(i64 r, u64 a, u64 n, u64 k, u64 m_K, u64 g) {
    check_common(r, n, k, m_K, g);
    if (n > 1 && (a % n == 0 || std::gcd(a % n, n) != 1))
        throw std::invalid_argument("a must be a unit mod n");
    u64 nk2 = n * k * k;
    u64 modulus = m_K * nk2;
    if (nk2 >= (u64(1) << 31) || modulus >= (u64(1) << 34))
        throw std::invalid_argument("count_Cg_brute: modulus beyond enumeration scale");
    u64 rhs = rhs_mod(r, a % n, k, nk2);
    u64 count = 0;
    for (u64 b = g % m_K; b < modulus; b += m_K) {
        u64 bp = b % nk2;
        if (4 * bp % nk2 * bp % nk2 != rhs) continue;
        if (std::gcd(b, modulus) == 1) ++count;
    }
    return count;
}

u64 count_Cg_ell(i64 r, u64 a, u64 n, u64 k, u64 m_K, u64 g, u64 ell) {
    check_common(r, n, k, m_K, g);
    u64 E = u64(nu(ell, i64(n))) + 2 * u64(nu(ell, i64(k)));
    u64 M = u64(nu(ell, i64(m_K)));
    if (E + M == 0) throw std::invalid_argument("ell must divide m_K*n*k^2");

    if (M == 0) {
        u64 c = rhs_mod(r, a % (n > 1 ? n : 1), k, ell);
        if (c == 0) return 0;
        return u64(1 + kronecker(i64(c), ell));
    }
    u64 t = std::min(E, M);
    u64 ell_t = pow_u64(ell, int(t));
    u64 lhs = 4 * (g % ell_t) % ell_t * (g % ell_t) % ell_t;
    return lhs == rhs_mod(r, a % (n > 1 ? n : 1), k, ell_t) ? ell_t : 0;
}

i64 c_k_closed(i64 r, u64 k, u64 ell, int e, u64 m_K, u64 g) {
    check_common(r, 1, k, m_K, g);
    u64 abs_r = u64(r < 0 ? -r : r);
    if (ell < 3 || !is_prime(ell) || (2 * abs_r) % ell == 0)
        throw std::invalid_argument("ell must be an odd prime not dividing 2r");
    if (e < 1) throw std::invalid_argument("e must be >= 1");

    i64 scale = i64(pow_u64(ell, e - 1));
    int nu_k = nu(ell, i64(k));
    u64 M = u64(nu(ell, i64(m_K)));

    if (nu_k == 0 && M == 0) {
        if (e % 2 == 0) return scale * (i64(ell) - 3);
        return scale * -(1 + kronecker(-1, ell));
    }
    i64 special = i64(count_Cg_ell(r, 1, 1, k, m_K, g, ell));
    if (M <= u64(2 * nu_k)) {
        if (e % 2 == 0) return scale * special * (i64(ell) - 1);
        return 0;
    }
    // 2*nu_k < M: the character of the exact unit quotient, taken e times
    if (special == 0) return 0;
    int chi = chi_shifted(ell, -big_D(r, g), 2 * nu_k);
    int chi_e = (e % 2 == 0) ? chi * chi : chi;
    return scale * special * chi_e * i64(ell);
}

i64 c_k_brute(i64 r, u64 k, u64 n, u64 m_K, u64 g) {
    check_common(r, n, k, m_K, g);
    if (n == 1) return 1;
    Factorization nf = factorize(n);
    i64 sum = 0;
    for (u64 a = 1; a < n; ++a) {
        if (std::gcd(a, n) != 1) continue;
        u64 rhs_n = rhs_mod(r, a, k, n);
        if (rhs_n == 0 || std::gcd(rhs_n, n) != 1) continue;
        i64 term = kronecker(i64(a), n);
        for (auto [ell, e] : nf.factors) {
            (void)e;
            term *= i64(count_Cg_ell(r, a, n, k, m_K, g, ell));
            if (term == 0) break;
        }
        sum += term;
    }
    return sum;
}

Rational kappa_factor(i64 r, u64 g, u64 ell, u64 m_K) {
    if (ell < 3 || !is_prime(ell)) throw std::invalid_argument("ell must be an odd prime");
    if (m_K % ell != 0) throw std::invalid_argument("ell must divide m_K");
    u64 abs_r = u64(r < 0 ? -r : r);
    if ((2 * abs_r) % ell == 0) throw std::invalid_argument("ell must not divide 2r");
    if (std::gcd(g, m_K) != 1) throw std::invalid_argument("g must be a unit mod m_K");

    int mu = nu(ell, i64(m_K));
    i128 D = big_D(r, g);  // never 0: r odd, 4g^2 even
    i128 ell_mu = 1;
    for (int i = 0; i < mu; ++i) ell_mu *= i128(ell);

    if (D % ell_mu == 0) {
        // case 3: valuation at or above nu_ell(m_K)
        int c = (mu + 1) / 2;
        i64 lc = i64(pow_u64(ell, c));
        i64 num = i64(pow_u64(ell, 2 * c + 1)) * (i64(ell) + 1) * (lc - 1) +
                  i64(pow_u64(ell, mu + 2));
        i64 den = i64(pow_u64(ell, 3 * c)) * (i64(ell) * i64(ell) - 1);
        return Rational(num, den);
    }
    int v = nu128(ell, D);
    if (v % 2 == 1) {
        // case 1: odd valuation below nu_ell(m_K)
        i64 num = i64(pow_u64(ell, (v + 1) / 2)) - 1;
        i64 den = i64(pow_u64(ell, (v - 1) / 2)) * (i64(ell) - 1);
        return Rational(num, den);
    }
    // case 2: even valuation below nu_ell(m_K)
    int chi = chi_shifted(ell, -D, v);
    i64 half = i64(pow_u64(ell, v / 2));
    Rational main(half * i64(ell) - 1, half * (i64(ell) - 1));
    return main + Rational(chi, half * (i64(ell) - chi));
}

Rational F0(u64 ell) {
    if (ell < 3 || !is_prime(ell)) throw std::invalid_argument("ell must be an odd prime");
    i64 l = i64(ell);
    return Rational(1) - Rational(kronecker(-1, ell) * l + 3, (l - 1) * (l - 1) * (l + 1));
}

std::optional<Rational> F1_g(u64 ell, u64 k, i64 r, u64 g, u64 m_K) {
    if (ell < 3 || !is_prime(ell)) throw std::invalid_argument("ell must be an odd prime");
    u64 abs_r = u64(r < 0 ? -r : r);
    if ((2 * abs_r) % ell == 0) throw std::invalid_argument("ell must not divide 2r");
    if ((m_K * k) % ell != 0) throw std::invalid_argument("ell must divide m_K*k");

    int nu_k = nu(ell, i64(k));
    int M = nu(ell, i64(m_K));
    i128 D = big_D(r, g);
    i64 l = i64(ell);

    auto holds_mod = [&](int exp) {
        i128 mod = 1;
        for (int i = 0; i < exp; ++i) mod *= i128(ell);
        return D % mod == 0;
    };

    if (2 * nu_k < M) {
        if (!holds_mod(2 * nu_k)) return std::nullopt;
        int chi = chi_shifted(ell, -D, 2 * nu_k);
        return Rational(1) + Rational(chi, l - chi);
    }
    if (!holds_mod(M)) return std::nullopt;
    return Rational(1) + Rational(1, l * (l + 1));
}

}  // namespace frobavg
