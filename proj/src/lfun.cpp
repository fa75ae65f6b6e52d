#include "frobavg/lfun.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace frobavg {

namespace {

void check_l_discriminant(i64 d) {
    if (d >= 0 || d == -1) throw std::invalid_argument("l_one: d must be a negative discriminant");
    i64 residue = ((d % 4) + 4) % 4;
    if (residue != 0 && residue != 1)
        throw std::invalid_argument("l_one: d must be 0 or 1 mod 4");
}

struct NeumaierSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double t = s + x;
        c += (std::fabs(s) >= std::fabs(x)) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    double get() const { return s + c; }
};

// Beyond this length chi_d(n) is sieved multiplicatively in segments instead
// of calling kronecker per n.  Both paths add the same doubles in the same
// ascending order, so the switch never changes the result.
constexpr u64 kSieveThreshold = 1 << 18;
constexpr u64 kSegment = 1 << 20;

double partial_sum_direct(i64 d, u64 y) {
    NeumaierSum acc;
    for (u64 n = 1; n <= y; ++n) {
        int chi = kronecker(d, n);
        if (chi) acc.add(double(chi) / double(n));
    }
    return acc.get();
}

double partial_sum_sieved(i64 d, u64 y) {
    u64 root = static_cast<u64>(std::sqrt(double(y))) + 2;
    PrimeTable table(root);
    std::vector<int8_t> chi_p(table.primes.size());
    for (size_t i = 0; i < table.primes.size(); ++i)
        chi_p[i] = static_cast<int8_t>(kronecker(d, table.primes[i]));

    NeumaierSum acc;
    std::vector<u64> rem(kSegment);
    std::vector<int8_t> val(kSegment);
    for (u64 lo = 1; lo <= y; lo += kSegment) {
        u64 hi = std::min(y + 1, lo + kSegment);
        u64 len = hi - lo;
        for (u64 i = 0; i < len; ++i) { rem[i] = lo + i; val[i] = 1; }
        for (size_t pi = 0; pi < table.primes.size(); ++pi) {
            u64 p = table.primes[pi];
            if (p >= hi) break;
            u64 start = ((lo + p - 1) / p) * p;
            for (u64 m = start; m < hi; m += p) {
                u64 idx = m - lo;
                int e = 0;
                while (rem[idx] % p == 0) { rem[idx] /= p; ++e; }
                if (chi_p[pi] == 0)
                    val[idx] = 0;
                else if (chi_p[pi] < 0 && (e & 1))
                    val[idx] = static_cast<int8_t>(-val[idx]);
            }
        }
        for (u64 i = 0; i < len; ++i) {
            int8_t v = val[i];
            if (v != 0 && rem[i] > 1) {
                // leftover cofactor is a prime > sqrt(y)
                v = static_cast<int8_t>(v * kronecker(d, rem[i]));
            }
            if (v) acc.add(double(v) / double(lo + i));
        }
    }
    return acc.get();
}

}  // namespace

i64 char_partial_sum(i64 d, u64 y, u64 modulus_filter) {
    if (modulus_filter == 0) throw std::invalid_argument("char_partial_sum: filter must be >= 1");
    i64 s = 0;
    for (u64 n = 1; n <= y; ++n) {
        if (modulus_filter > 1 && std::gcd(n, modulus_filter) != 1) continue;
        s += kronecker(d, n);
    }
    return s;
}

LValue l_at(i64 d, u64 y) {
    check_l_discriminant(d);
    if (y == 0) throw std::invalid_argument("l_at: y must be positive");
    if (y > (u64(1) << 31))
        throw std::invalid_argument("l_at: truncation length beyond desk scale");
    LValue lv;
    lv.d = d;
    lv.y = y;
    lv.value = (y <= kSieveThreshold) ? partial_sum_direct(d, y) : partial_sum_sieved(d, y);
    double absd = double(-d);
    lv.tail_bound = std::sqrt(absd) * std::log(absd) / double(y);
    return lv;
}

LValue l_one(i64 d, double rel_err_target) {
    check_l_discriminant(d);
    if (!(rel_err_target > 0.0) || !(rel_err_target < 1.0))
        throw std::invalid_argument("l_one: rel_err_target must lie in (0,1)");
    double absd = double(-d);
    double pv = std::sqrt(absd) * std::log(absd);
    double l_floor = 1.0 / (2.0 * std::log(absd));
    // Start from the length that suffices when L(1, chi_d) ~ 1, then double
    // until the rigorous tail bound is small against the certified lower
    // bound max(|value| - tail, L_floor).  Terminates no later than
    // y = 2 PV / (rel * L_floor), the non-adaptive choice, because the tail
    // is PV / y and the certified bound never drops below L_floor.
    u64 y = static_cast<u64>(std::ceil(pv / rel_err_target));
    if (y == 0) y = 1;
    for (;;) {
        LValue lv = l_at(d, y);
        double certified =
            std::max(std::fabs(lv.value) - lv.tail_bound, l_floor);
        if (lv.tail_bound <= rel_err_target * certified) return lv;
        y *= 2;
    }
}

}  // namespace frobavg
