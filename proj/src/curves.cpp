#include "frobavg/curves.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

#include "frobavg/parallel.hpp"
#include "frobavg/quadform.hpp"

namespace frobavg {

namespace {

constexpr u64 kMaxFieldPrime = u64(1) << 20;  // keeps products in 64 bits

u64 reduce_signed(i64 v, u64 p) {
    i64 m = v % i64(p);
    if (m < 0) m += i64(p);
    return u64(m);
}

}  // namespace

Fp2::Fp2(u64 p_, std::optional<u64> nonresidue) : p(p_) {
    if (p <= 3 || p >= kMaxFieldPrime || !is_prime(p))
        throw std::invalid_argument("Fp2: p must be a prime in (3, 2^20)");
    legendre.assign(p, -1);
    legendre[0] = 0;
    for (u64 j = 1; j < p; ++j) legendre[j * j % p] = 1;
    if (nonresidue) {
        u = *nonresidue % p;
        if (u == 0 || legendre[u] != -1)
            throw std::invalid_argument(
                "Fp2: supplied nonresidue is not a quadratic non-residue");
    } else {
        u = 2;
        while (legendre[u] != -1) ++u;
    }
}

Fp2::Elt Fp2::make(i64 c0, i64 c1) const {
    return Elt{reduce_signed(c0, p), reduce_signed(c1, p)};
}

Fp2::Elt Fp2::add(Elt v, Elt w) const {
    u64 c0 = v.c0 + w.c0;
    if (c0 >= p) c0 -= p;
    u64 c1 = v.c1 + w.c1;
    if (c1 >= p) c1 -= p;
    return Elt{c0, c1};
}

Fp2::Elt Fp2::sub(Elt v, Elt w) const {
    u64 c0 = v.c0 + p - w.c0;
    if (c0 >= p) c0 -= p;
    u64 c1 = v.c1 + p - w.c1;
    if (c1 >= p) c1 -= p;
    return Elt{c0, c1};
}

Fp2::Elt Fp2::neg(Elt v) const {
    return Elt{v.c0 == 0 ? 0 : p - v.c0, v.c1 == 0 ? 0 : p - v.c1};
}

Fp2::Elt Fp2::mul(Elt v, Elt w) const {
    // (v0 + v1 t)(w0 + w1 t) = v0 w0 + u v1 w1 + (v0 w1 + v1 w0) t
    u64 c0 = (v.c0 * w.c0 + u * (v.c1 * w.c1 % p)) % p;
    u64 c1 = (v.c0 * w.c1 + v.c1 * w.c0) % p;
    return Elt{c0, c1};
}

Fp2::Elt Fp2::scale(u64 s, Elt v) const {
    return Elt{s * v.c0 % p, s * v.c1 % p};
}

Fp2::Elt Fp2::inv(Elt v) const {
    u64 nv = norm(v);
    if (nv == 0) throw std::invalid_argument("Fp2: inverse of zero");
    // v^{-1} = conj(v) / N(v), conj(c0 + c1 t) = c0 - c1 t
    u64 ninv = powmod(nv, p - 2, p);
    return Elt{v.c0 * ninv % p, (v.c1 == 0 ? 0 : p - v.c1) * ninv % p};
}

u64 Fp2::norm(Elt v) const {
    u64 s = u * (v.c1 * v.c1 % p) % p;  // u c1^2
    return (v.c0 * v.c0 % p + p - s) % p;
}

i64 trace_of(const Fp2& F, Fp2::Elt a, Fp2::Elt b) {
    // singular iff 4a^3 + 27b^2 = 0
    Fp2::Elt a3 = F.mul(F.sqr(a), a);
    Fp2::Elt disc = F.add(F.scale(4 % F.p, a3), F.scale(27 % F.p, F.sqr(b)));
    if (F.is_zero(disc)) throw std::invalid_argument("trace_of: singular model");
    i64 sum = 0;
    for (u64 id = 0; id < F.p * F.p; ++id) {
        Fp2::Elt x{id % F.p, id / F.p};
        Fp2::Elt v = F.add(F.add(F.mul(F.sqr(x), x), F.mul(a, x)), b);
        sum += F.chi2(v);
    }
    return -sum;
}

int aut_order(const Fp2& F, Fp2::Elt a, Fp2::Elt b) {
    Fp2::Elt a3 = F.mul(F.sqr(a), a);
    Fp2::Elt disc = F.add(F.scale(4 % F.p, a3), F.scale(27 % F.p, F.sqr(b)));
    if (F.is_zero(disc)) throw std::invalid_argument("aut_order: singular model");
    if (F.is_zero(a)) return 6;   // j = 0
    if (F.is_zero(b)) return 4;   // j = 1728
    return 2;
}

u64 TraceHistogram::model_count(i64 trace) const {
    auto it = models.find(trace);
    return it == models.end() ? 0 : it->second;
}

Rational TraceHistogram::weighted(i64 trace) const {
    return Rational(i64(model_count(trace)), i64(p * p - 1));
}

Rational TraceHistogram::weighted_total() const {
    Rational total(0);
    for (const auto& [trace, count] : models)
        total = total + Rational(i64(count), i64(p * p - 1));
    return total;
}

TraceHistogram trace_histogram(u64 p, unsigned threads, u64 p_limit) {
    if (!is_prime(p) || p <= 3)
        throw std::invalid_argument("trace_histogram: p must be a prime > 3");
    if (p > p_limit)
        throw std::invalid_argument(
            "trace_histogram: p exceeds the configured limit (" +
            std::to_string(p_limit) + ")");

    Fp2 F(p);
    const u64 q = p * p;
    const u64 buckets = 4 * p + 1;  // traces in [-2p, 2p] by Hasse

    // id tables: cube of each element, chi2 of each element
    std::vector<u64> cube0(q), cube1(q);
    std::vector<signed char> chi(q);
    for (u64 id = 0; id < q; ++id) {
        Fp2::Elt x{id % p, id / p};
        Fp2::Elt x3 = F.mul(F.sqr(x), x);
        cube0[id] = x3.c0;
        cube1[id] = x3.c1;
        chi[id] = (signed char)F.chi2(x);
    }

    std::atomic<bool> hasse_violated{false};

    auto slice = [&](std::size_t aid) -> std::vector<u64> {
        std::vector<u64> counts(buckets, 0);
        Fp2::Elt a{u64(aid) % p, u64(aid) / p};
        Fp2::Elt four_a3 = F.scale(4 % p, Fp2::Elt{cube0[aid], cube1[aid]});
        // s[x] = x^3 + a x, componentwise
        std::vector<u64> s0(q), s1(q);
        for (u64 id = 0; id < q; ++id) {
            Fp2::Elt x{id % p, id / p};
            Fp2::Elt ax = F.mul(a, x);
            u64 v0 = cube0[id] + ax.c0;
            if (v0 >= p) v0 -= p;
            u64 v1 = cube1[id] + ax.c1;
            if (v1 >= p) v1 -= p;
            s0[id] = v0;
            s1[id] = v1;
        }
        const u64 t27 = 27 % p;
        for (u64 bid = 0; bid < q; ++bid) {
            Fp2::Elt b{bid % p, bid / p};
            Fp2::Elt disc = F.add(four_a3, F.scale(t27, F.sqr(b)));
            if (F.is_zero(disc)) continue;  // singular model
            i64 sum = 0;
            for (u64 id = 0; id < q; ++id) {
                u64 v0 = s0[id] + b.c0;
                if (v0 >= p) v0 -= p;
                u64 v1 = s1[id] + b.c1;
                if (v1 >= p) v1 -= p;
                sum += chi[v0 + p * v1];
            }
            i64 trace = -sum;
            i64 idx = trace + i64(2 * p);
            if (idx < 0 || u64(idx) >= buckets) {
                hasse_violated.store(true);
                return counts;
            }
            counts[u64(idx)]++;
        }
        return counts;
    };

    auto per_a = parallel_map<std::vector<u64>>(q, threads, slice);
    if (hasse_violated.load())
        throw std::logic_error("trace_histogram: Hasse bound violated");

    std::vector<u64> total(buckets, 0);
    for (const auto& counts : per_a)
        for (u64 i = 0; i < buckets; ++i) total[i] += counts[i];

    TraceHistogram h;
    h.p = p;
    u64 models_seen = 0;
    for (u64 i = 0; i < buckets; ++i) {
        if (total[i] == 0) continue;
        h.models[i64(i) - i64(2 * p)] = total[i];
        models_seen += total[i];
    }
    if (models_seen != q * q - q)
        throw std::logic_error("trace_histogram: model count mismatch");
    return h;
}

TraceHistogram supersingular_slice(const TraceHistogram& h) {
    TraceHistogram out;
    out.p = h.p;
    const i64 p = i64(h.p);
    for (i64 t : {i64(0), p, -p, 2 * p, -2 * p}) {
        auto it = h.models.find(t);
        if (it != h.models.end()) out.models[t] = it->second;
    }
    return out;
}

DeuringResult deuring_check(const TraceHistogram& h, i64 r) {
    const i64 p = i64(h.p);
    if (r % p == 0)
        throw std::invalid_argument("deuring_check: p must not divide r");
    if (r * r >= 4 * p * p)
        throw std::invalid_argument("deuring_check: need r^2 < 4p^2");
    DeuringResult res;
    res.p = h.p;
    res.r = r;
    res.lhs = h.weighted(r);
    res.rhs = hurwitz(r * r - 4 * p * p).value;
    res.equal = res.lhs == res.rhs;
    return res;
}

DeuringResult deuring_check(u64 p, i64 r, unsigned threads) {
    return deuring_check(trace_histogram(p, threads), r);
}

}  // namespace frobavg
