#include "frobavg/quadform.hpp"

#include <numeric>
#include <stdexcept>

#include "frobavg/parallel.hpp"

namespace frobavg {

namespace {

void check_discriminant(i64 d) {
    if (d >= 0) throw std::invalid_argument("discriminant must be negative");
    i64 residue = ((d % 4) + 4) % 4;
    if (residue != 0 && residue != 1)
        throw std::invalid_argument("discriminant must be 0 or 1 mod 4");
}

}  // namespace

ClassNumberResult class_number(i64 d) {
    check_discriminant(d);
    u64 absd = u64(-d);
    ClassNumberResult res;
    res.w = (d == -3) ? 6 : (d == -4) ? 4 : 2;

    // Walk b over the parity class of d with 3b^2 <= |d| (forced by
    // |b| <= a <= c); for each b the outer coefficients are the divisor
    // pairs a*c = (b^2 - d)/4 with b <= a <= c.
    u64 b = (absd & 1) ? 1 : 0;
    for (; 3 * b * b <= absd; b += 2) {
        u64 m = (b * b + absd) / 4;
        for (u64 a : divisors(m)) {
            if (a * a > m) break;
            if (a < b || a == 0) continue;
            u64 c = m / a;
            u64 g = std::gcd(std::gcd(a, b), c);
            if (g != 1) continue;
            res.h += (b == 0 || b == a || a == c) ? 1 : 2;
        }
    }
    return res;
}

HurwitzValue hurwitz(i64 D) {
    check_discriminant(D);
    HurwitzValue hv;
    hv.D = D;
    // k runs over divisors of the square part of D.
    Factorization f = factorize(u64(-D));
    u64 sqroot = 1;
    for (auto [p, e] : f.factors)
        for (int i = 0; i < e / 2; ++i) sqroot *= p;
    for (u64 k : divisors(sqroot)) {
        i64 d = D / i64(k * k);
        i64 residue = ((d % 4) + 4) % 4;
        if (residue != 0 && residue != 1) continue;
        ClassNumberResult cn = class_number(d);
        hv.terms.push_back({k, cn.h, cn.w});
        hv.value += Rational(cn.h, cn.w);
    }
    return hv;
}

Rational hurwitz_sum(u64 T, i64 r, unsigned threads) {
    u64 lower = 3 * u64(r < 0 ? -r : r);
    std::vector<u64> primes;
    if (T >= 2) {
        PrimeTable table(T);
        for (u64 p : table.primes)
            if (p > lower) primes.push_back(p);
    }
    std::vector<Rational> parts = parallel_map<Rational>(
        primes.size(), threads, [&](size_t i) {
            i64 p = i64(primes[i]);
            return hurwitz(r * r - 4 * p * p).value;
        });
    Rational total;  // ordered reduction: deterministic under any thread count
    for (const Rational& part : parts) total += part;
    return total;
}

}  // namespace frobavg
