#include "frobavg/arith.hpp"

#include <algorithm>
#include <numeric>

namespace frobavg {

u64 powmod(u64 base, u64 exp, u64 mod) {
    if (mod == 1) return 0;
    u64 r = 1;
    base %= mod;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, mod);
        base = mulmod(base, base, mod);
        exp >>= 1;
    }
    return r;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // Witness set proven sufficient for all n < 3.3e24, far beyond 2^64.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

u64 Factorization::recompose() const {
    u64 n = 1;
    for (auto [p, e] : factors)
        for (int i = 0; i < e; ++i) n *= p;
    return n;
}

namespace {

// Brent-cycle Pollard rho with fixed polynomial increments: deterministic.
u64 pollard_rho(u64 n) {
    if ((n & 1) == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        while (d == 1) {
            x = (mulmod(x, x, n) + c) % n;
            y = (mulmod(y, y, n) + c) % n;
            y = (mulmod(y, y, n) + c) % n;
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

void factor_recursive(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) { out.push_back(n); return; }
    u64 d = pollard_rho(n);
    factor_recursive(d, out);
    factor_recursive(n / d, out);
}

}  // namespace

Factorization factorize(u64 n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    Factorization f;
    f.value = n;
    std::vector<u64> primes;
    for (u64 p : {2ull, 3ull, 5ull}) {
        while (n % p == 0) { primes.push_back(p); n /= p; }
    }
    // 2/3/5 wheel over candidates up to 1e7.
    static const int wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
    u64 p = 7;
    int wi = 0;
    while (p <= 10000000ull && p * p <= n) {
        while (n % p == 0) { primes.push_back(p); n /= p; }
        p += wheel[wi];
        wi = (wi + 1) & 7;
    }
    if (n > 1) {
        if (p * p > n) {
            primes.push_back(n);
        } else {
            factor_recursive(n, primes);
        }
    }
    std::sort(primes.begin(), primes.end());
    for (u64 q : primes) {
        if (!f.factors.empty() && f.factors.back().first == q)
            ++f.factors.back().second;
        else
            f.factors.push_back({q, 1});
    }
    return f;
}

int nu(u64 ell, i64 m) {
    if (m == 0) throw std::invalid_argument("nu: valuation of 0 is infinite");
    if (ell < 2) throw std::invalid_argument("nu: ell must be prime");
    u64 a = m < 0 ? u64(-(m + 1)) + 1 : u64(m);  // |m| without overflow at INT64_MIN
    int v = 0;
    while (a % ell == 0) { a /= ell; ++v; }
    return v;
}

u64 kappa(u64 N, u64 n) {
    if (n == 0) throw std::invalid_argument("kappa: n must be positive");
    u64 k = 1;
    for (auto [ell, e] : factorize(n).factors) {
        if (N % ell != 0 && (e & 1)) k *= ell;
    }
    return k;
}

u64 euler_phi(const Factorization& f) {
    u64 r = 1;
    for (auto [p, e] : f.factors) {
        r *= p - 1;
        for (int i = 1; i < e; ++i) r *= p;
    }
    return r;
}

u64 euler_phi(u64 n) { return euler_phi(factorize(n)); }

int omega(u64 n) { return static_cast<int>(factorize(n).factors.size()); }

std::vector<u64> divisors(const Factorization& f) {
    std::vector<u64> divs{1};
    for (auto [p, e] : f.factors) {
        size_t sz = divs.size();
        u64 pk = 1;
        for (int i = 0; i < e; ++i) {
            pk *= p;
            for (size_t j = 0; j < sz; ++j) divs.push_back(divs[j] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

std::vector<u64> divisors(u64 n) { return divisors(factorize(n)); }

int kronecker(i64 d, u64 n) {
    if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
    if ((d & 1) == 0 && (n & 1) == 0) return 0;
    int k = 1;
    // split off the even part of n: (d/2) = +-1 via d mod 8, or 0 for even d
    int v = 0;
    while ((n & 1) == 0) { n >>= 1; ++v; }
    if (v & 1) {
        i64 dm8 = ((d % 8) + 8) % 8;
        if (dm8 == 1 || dm8 == 7) {
            // (d/2) = 1
        } else if (dm8 == 3 || dm8 == 5) {
            k = -k;
        } else {
            return 0;  // d even
        }
    }
    // now n is odd: Jacobi symbol with the sign rule (-1/n) = (-1)^((n-1)/2)
    if (d < 0) {
        d = -d;
        if (n % 4 == 3) k = -k;
    }
    u64 a = u64(d) % n;
    while (a != 0) {
        v = 0;
        while ((a & 1) == 0) { a >>= 1; ++v; }
        if (v & 1) {
            u64 nm8 = n % 8;
            if (nm8 == 3 || nm8 == 5) k = -k;
        }
        if ((a % 4 == 3) && (n % 4 == 3)) k = -k;
        u64 t = n % a;
        n = a;
        a = t;
    }
    return n == 1 ? k : 0;
}

u64 sqrt_mod(u64 a, u64 p) {
    if (p < 3 || (p & 1) == 0 || !is_prime(p))
        throw std::invalid_argument("sqrt_mod: modulus must be an odd prime");
    a %= p;
    if (a == 0) return 0;
    if (kronecker(i64(a), p) != 1)
        throw std::invalid_argument("sqrt_mod: non-residue has no square root");
    u64 r;
    if (p % 4 == 3) {
        r = powmod(a, (p + 1) / 4, p);
    } else {
        // Tonelli-Shanks: write p-1 = q * 2^s with q odd
        u64 q = p - 1;
        unsigned s = 0;
        while ((q & 1) == 0) { q >>= 1; ++s; }
        u64 z = 2;
        while (kronecker(i64(z), p) != -1) ++z;
        u64 m = s;
        u64 c = powmod(z, q, p);
        u64 t = powmod(a, q, p);
        r = powmod(a, (q + 1) / 2, p);
        while (t != 1) {
            u64 t2 = t;
            u64 i = 0;
            while (t2 != 1) { t2 = mulmod(t2, t2, p); ++i; }
            u64 b = powmod(c, u64(1) << (m - i - 1), p);
            r = mulmod(r, b, p);
            c = mulmod(b, b, p);
            t = mulmod(t, c, p);
            m = i;
        }
    }
    return std::min(r, p - r);
}

PrimeTable::PrimeTable(u64 limit_) : limit(limit_) {
    if (limit < 2) return;
    std::vector<bool> composite(limit + 1, false);
    for (u64 i = 2; i * i <= limit; ++i) {
        if (!composite[i])
            for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    for (u64 i = 2; i <= limit; ++i)
        if (!composite[i]) primes.push_back(i);
}

}  // namespace frobavg
