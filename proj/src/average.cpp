#include "frobavg/average.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "frobavg/constant.hpp"
#include "frobavg/curves.hpp"
#include "frobavg/lfun.hpp"
#include "frobavg/parallel.hpp"
#include "frobavg/quadform.hpp"

namespace frobavg {

namespace {

u64 isqrt_u64(u64 n) {
    u64 r = u64(std::sqrt(double(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_degree2_prime(const GaloisProfile& profile, u64 p) {
    if (profile.is_ramified(p)) return false;
    return frobenius_degree(profile, p) == 2;
}

struct ClassifiedPrime {
    u64 p = 0;
    std::size_t tau = 0;
    double logp = 0;
};

// All degree-2 primes <= x together with their splitting class.
std::vector<ClassifiedPrime> classify_degree2(const GaloisProfile& profile,
                                              u64 x, unsigned threads) {
    if (x < 2) return {};
    PrimeTable pt(x);
    auto tags = parallel_map<int>(pt.primes.size(), threads, [&](std::size_t i) {
        u64 p = pt.primes[i];
        if (!is_degree2_prime(profile, p)) return -1;
        auto t = tau_of_prime(profile, p);
        return t ? int(*t) : -1;
    });
    std::vector<ClassifiedPrime> out;
    for (std::size_t i = 0; i < pt.primes.size(); ++i)
        if (tags[i] >= 0)
            out.push_back({pt.primes[i], std::size_t(tags[i]),
                           std::log(double(pt.primes[i]))});
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// theta sums
// ---------------------------------------------------------------------------

std::vector<u64> theta_primes(const GaloisProfile& profile, u64 x,
                              std::size_t tau_index, u64 q, u64 a) {
    if (tau_index >= profile.taus.size())
        throw std::invalid_argument("theta: tau index out of range");
    if (q < 1) throw std::invalid_argument("theta: q must be >= 1");
    const u64 M = q * profile.m_K;
    if (a < 1 || a > M)
        throw std::invalid_argument("theta: need 1 <= a <= q*m_K");
    std::vector<u64> out;
    if (x < 2) return out;
    PrimeTable pt(x);
    for (u64 p : pt.primes) {
        if (p % M != a % M) continue;
        if (!is_degree2_prime(profile, p)) continue;
        auto t = tau_of_prime(profile, p);
        if (!t || *t != tau_index) continue;
        out.push_back(p);
    }
    return out;
}

double theta_sum(const GaloisProfile& profile, u64 x, std::size_t tau_index,
                 u64 q, u64 a) {
    double s = 0;
    for (u64 p : theta_primes(profile, x, tau_index, q, a))
        s += std::log(double(p));
    return s;
}

// ---------------------------------------------------------------------------
// BDH error sum
// ---------------------------------------------------------------------------

BdhReport bdh_error(const GaloisProfile& profile, u64 x, u64 Q,
                    std::size_t tau_index, unsigned threads) {
    if (tau_index >= profile.taus.size())
        throw std::invalid_argument("bdh_error: tau index out of range");
    if (Q < 1) throw std::invalid_argument("bdh_error: Q must be >= 1");

    const TauClass& tau = profile.taus[tau_index];
    const u64 mK = profile.m_K;

    auto primes = classify_degree2(profile, x, threads);

    BdhReport rep;
    rep.x = x;
    rep.Q = Q;
    rep.tau_index = tau_index;
    rep.error_sum = 0;

    std::vector<double> bucket;
    for (u64 q = 1; q <= Q; ++q) {
        const u64 M = q * mK;
        bucket.assign(M, 0.0);
        for (const auto& cp : primes)
            if (cp.tau == tau_index) bucket[cp.p % M] += cp.logp;
        const double expected =
            double(tau.c_size) * double(x) /
            (double(phi_K(profile, M)) * double(profile.n_K));
        for (u64 a = 1; a <= M; ++a) {
            if (std::gcd(a, M) != 1) continue;
            // compatible with S_tau mod m_K?
            if (!std::binary_search(tau.S.begin(), tau.S.end(), a % mK))
                continue;
            BdhCell cell;
            cell.q = q;
            cell.a = a;
            cell.theta = bucket[a % M];
            cell.expected = expected;
            rep.error_sum += (cell.theta - cell.expected) *
                             (cell.theta - cell.expected);
            rep.cells.push_back(cell);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// A(T; r)
// ---------------------------------------------------------------------------

double A_series(const GaloisProfile& profile, i64 r, u64 T, double l_rel_err,
                unsigned threads) {
    if (r % 2 == 0) throw std::invalid_argument("A_series: r must be odd");
    if (T < 2) throw std::invalid_argument("A_series: T must be >= 2");
    if (!(l_rel_err > 0) || l_rel_err > 1)
        throw std::invalid_argument("A_series: l_rel_err must be in (0,1]");

    const u64 abs_r = u64(r < 0 ? -r : r);
    PrimeTable pt(T);
    std::vector<u64> ps;
    for (u64 p : pt.primes)
        if (p > 3 * abs_r && is_degree2_prime(profile, p)) ps.push_back(p);

    auto terms = parallel_map<double>(ps.size(), threads, [&](std::size_t i) {
        const u64 p = ps[i];
        const i64 D = r * r - 4 * i64(p) * i64(p);  // < 0 since p > 3|r|
        const double logp = std::log(double(p));
        // walk k with k^2 | D, k odd (D = 1 mod 4 kills even k anyway),
        // gcd(k, 2r) = 1; every such k satisfies k <= sqrt(|D|) < 2T
        Factorization f = factorize(u64(-D));
        std::vector<u64> ks{1};
        for (const auto& [ell, e] : f.factors) {
            if (e < 2) continue;
            const std::size_t base = ks.size();
            u64 pw = 1;
            for (int j = 1; 2 * j <= e; ++j) {
                pw *= ell;
                for (std::size_t t = 0; t < base; ++t) ks.push_back(ks[t] * pw);
            }
        }
        double acc = 0;
        for (u64 k : ks) {
            if (std::gcd(k, 2 * abs_r) != 1) continue;
            if (k > 2 * T) continue;  // cannot happen; guard per the contract
            const i64 d = D / i64(k * k);
            acc += l_one(d, l_rel_err).value * logp / double(k);
        }
        return acc;
    });

    double total = 0;
    for (double t : terms) total += t;
    return total;
}

AverageReport a_series_report(const GaloisProfile& profile, i64 r,
                              const std::vector<u64>& T_grid, double l_rel_err,
                              unsigned threads) {
    if (T_grid.empty() || !std::is_sorted(T_grid.begin(), T_grid.end()) ||
        std::adjacent_find(T_grid.begin(), T_grid.end()) != T_grid.end())
        throw std::invalid_argument("a_series_report: grid must be ascending");
    AverageReport rep;
    rep.kind = "A_series";
    for (u64 T : T_grid)
        rep.grid.push_back({double(T), A_series(profile, r, T, l_rel_err, threads)});
    // A(T) ~ c' T with c' = (2 pi / n_K) * C
    ConstantBreakdown cb = constant_full(profile, r, "product");
    rep.predicted_slope = 2.0 * 3.14159265358979323846 / double(profile.n_K) *
                          cb.value;
    for (std::size_t i = 0; i + 1 < rep.grid.size(); ++i) {
        double dq = (rep.grid[i + 1].empirical - rep.grid[i].empirical) /
                    (rep.grid[i + 1].x - rep.grid[i].x);
        rep.fit_residuals.push_back(dq - rep.predicted_slope);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// class-number route
// ---------------------------------------------------------------------------

AverageReport class_sum_average(const GaloisProfile& profile, i64 r,
                                const std::vector<u64>& x_grid,
                                unsigned threads) {
    if (x_grid.empty() || !std::is_sorted(x_grid.begin(), x_grid.end()) ||
        std::adjacent_find(x_grid.begin(), x_grid.end()) != x_grid.end())
        throw std::invalid_argument("class_sum_average: grid must be ascending");
    for (u64 x : x_grid)
        if (x < 2)
            throw std::invalid_argument("class_sum_average: grid entries >= 2");

    const u64 abs_r = u64(r < 0 ? -r : r);
    const u64 p_max = isqrt_u64(x_grid.back());

    std::vector<u64> ps;
    if (p_max >= 2) {
        PrimeTable pt(p_max);
        for (u64 p : pt.primes)
            if (p > 3 * abs_r && is_degree2_prime(profile, p)) ps.push_back(p);
    }

    auto terms = parallel_map<double>(ps.size(), threads, [&](std::size_t i) {
        const u64 p = ps[i];
        const i64 D = r * r - 4 * i64(p) * i64(p);
        return hurwitz(D).value.to_double() / (double(p) * double(p));
    });

    AverageReport rep;
    rep.kind = "class_sum";
    const double scale = double(profile.n_K) / 2.0;
    std::size_t idx = 0;
    double acc = 0;
    for (u64 x : x_grid) {
        const u64 bound = isqrt_u64(x);
        while (idx < ps.size() && ps[idx] <= bound) acc += terms[idx], ++idx;
        rep.grid.push_back({double(x), scale * acc});
    }

    ConstantBreakdown cb = constant_full(profile, r, "product");
    rep.predicted_slope = cb.value;
    for (std::size_t i = 0; i + 1 < rep.grid.size(); ++i) {
        double dll = std::log(std::log(rep.grid[i + 1].x)) -
                     std::log(std::log(rep.grid[i].x));
        double dq = (rep.grid[i + 1].empirical - rep.grid[i].empirical) / dll;
        rep.fit_residuals.push_back(dq - rep.predicted_slope);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// box simulator
// ---------------------------------------------------------------------------

namespace {

// Exact arithmetic in Z[omega]: omega = i (m_K = 4) or omega = (1+sqrt(-3))/2
// (m_K = 3, omega^2 = omega - 1).  Coordinates stay tiny (box bounds), so
// plain i64 is ample.
struct RingElt {
    i64 x = 0, y = 0;  // x + y*omega
};

RingElt ring_mul(RingElt v, RingElt w, u64 m_K) {
    if (m_K == 4) return {v.x * w.x - v.y * w.y, v.x * w.y + v.y * w.x};
    return {v.x * w.x - v.y * w.y, v.x * w.y + v.y * w.x + v.y * w.y};
}

struct Model {
    int a0, a1, b0, b1;
};

// Shared per-prime field context for the box scans.
struct BoxField {
    Fp2 F;
    Fp2::Elt omega_img;            // image of omega in F_{p^2}
    std::vector<u64> cube0, cube1;  // id -> coordinates of x^3
    std::vector<signed char> chi;   // id -> chi2 of the element with that id

    explicit BoxField(u64 p, u64 m_K)
        : F(p, m_K == 4 ? std::optional<u64>(p - 1) : std::nullopt) {
        if (m_K == 4) {
            omega_img = Fp2::Elt{0, 1};  // i -> t, t^2 = -1
        } else {
            // omega = (1 + sqrt(-3))/2; sqrt(-3) = c*t with c^2 = -3/u
            u64 target = (p - 3) % p;
            u64 uinv = powmod(F.u, p - 2, p);
            u64 c = sqrt_mod(target * uinv % p, p);
            u64 inv2 = (p + 1) / 2;
            omega_img = Fp2::Elt{inv2 % p, c * inv2 % p};
            if (!F.eq(F.sqr(omega_img), F.sub(omega_img, F.make(1, 0))))
                throw std::logic_error("box: omega image fails omega^2 = omega - 1");
        }
        const u64 q = p * p;
        cube0.resize(q);
        cube1.resize(q);
        chi.resize(q);
        for (u64 id = 0; id < q; ++id) {
            Fp2::Elt x{id % p, id / p};
            Fp2::Elt x3 = F.mul(F.sqr(x), x);
            cube0[id] = x3.c0;
            cube1[id] = x3.c1;
            chi[id] = (signed char)F.chi2(x);
        }
    }

    u64 id_of(Fp2::Elt v) const { return v.c0 + F.p * v.c1; }

    // reduce a ring element with the given coordinates mod p
    Fp2::Elt reduce(i64 x, i64 y, u64 m_K) const {
        const u64 p = F.p;
        u64 rx = u64(((x % i64(p)) + i64(p)) % i64(p));
        u64 ry = u64(((y % i64(p)) + i64(p)) % i64(p));
        if (m_K == 4) return Fp2::Elt{rx, ry};
        Fp2::Elt t = F.scale(ry, omega_img);
        u64 c0 = t.c0 + rx;
        if (c0 >= p) c0 -= p;
        return Fp2::Elt{c0, t.c1};
    }
};

}  // namespace

BoxRun box_run(const GaloisProfile& profile, i64 r, const BoxBounds& bounds,
               u64 x, unsigned threads, BoxMethod method) {
    if (profile.n_K != 2 || (profile.m_K != 3 && profile.m_K != 4))
        throw std::invalid_argument(
            "box: profile must be imaginary quadratic (n_K = 2, m_K in {3,4})");
    for (u64 b : {bounds.A[0], bounds.A[1], bounds.B[0], bounds.B[1]})
        if (b < 1) throw std::invalid_argument("box: every bound must be >= 1");
    if (x > 10000) throw std::invalid_argument("box: x beyond desk scale (10^4)");
    const u64 raw = (2 * bounds.A[0] + 1) * (2 * bounds.A[1] + 1) *
                    (2 * bounds.B[0] + 1) * (2 * bounds.B[1] + 1);
    if (raw > 50000000)
        throw std::invalid_argument("box: more than 5*10^7 raw models");

    const u64 mK = profile.m_K;

    // enumerate the box once; drop globally singular models 4a^3 + 27b^2 = 0
    std::vector<Model> models;
    models.reserve(raw);
    for (i64 a0 = -i64(bounds.A[0]); a0 <= i64(bounds.A[0]); ++a0)
        for (i64 a1 = -i64(bounds.A[1]); a1 <= i64(bounds.A[1]); ++a1)
            for (i64 b0 = -i64(bounds.B[0]); b0 <= i64(bounds.B[0]); ++b0)
                for (i64 b1 = -i64(bounds.B[1]); b1 <= i64(bounds.B[1]); ++b1) {
                    RingElt alpha{a0, a1}, beta{b0, b1};
                    RingElt a3 = ring_mul(ring_mul(alpha, alpha, mK), alpha, mK);
                    RingElt b2 = ring_mul(beta, beta, mK);
                    i64 dx = 4 * a3.x + 27 * b2.x;
                    i64 dy = 4 * a3.y + 27 * b2.y;
                    if (dx == 0 && dy == 0) continue;
                    models.push_back({int(a0), int(a1), int(b0), int(b1)});
                }
    if (models.empty())
        throw std::invalid_argument("box: empty after removing singular models");

    // degree-2 primes with p^2 <= x; p > 3 so short Weierstrass reduction works
    std::vector<u64> ps;
    const u64 p_max = isqrt_u64(x);
    if (p_max >= 5) {
        PrimeTable pt(p_max);
        for (u64 p : pt.primes)
            if (p > 3 && is_degree2_prime(profile, p)) ps.push_back(p);
    }

    std::atomic<bool> broken{false};

    auto count_for_prime = [&](std::size_t pi) -> u64 {
        const u64 p = ps[pi];
        const u64 q = p * p;
        BoxField bf(p, mK);
        const Fp2& F = bf.F;

        // coordinate residue lookup
        auto residues = [&](u64 bound) {
            std::vector<u64> v(2 * bound + 1);
            for (u64 i = 0; i < v.size(); ++i)
                v[i] = u64(((i64(i) - i64(bound)) % i64(p) + i64(p)) % i64(p));
            return v;
        };
        auto ra0 = residues(bounds.A[0]), ra1 = residues(bounds.A[1]);
        auto rb0 = residues(bounds.B[0]), rb1 = residues(bounds.B[1]);

        auto reduce_pair = [&](u64 c0raw, u64 c1raw) -> Fp2::Elt {
            if (mK == 4) return Fp2::Elt{c0raw, c1raw};
            Fp2::Elt t = F.scale(c1raw, bf.omega_img);
            u64 c0 = t.c0 + c0raw;
            if (c0 >= p) c0 -= p;
            return Fp2::Elt{c0, t.c1};
        };

        const u64 four = 4 % p, t27 = 27 % p;
        u64 hits = 0;

        if (method == BoxMethod::trace_table) {
            // trace tables through the twist orbit: for a,b != 0,
            // trace(a,b) = chi2(ab) * trace(w,w) with w = a^3/b^2
            constexpr i64 kNoTrace = INT64_MIN;
            std::vector<i64> Tw(q, kNoTrace), Ta(q, kNoTrace), Tb(q, kNoTrace);
            auto fill = [&](Fp2::Elt a, Fp2::Elt b) -> i64 {
                // char sum with the cube table; caller guarantees nonsingular
                Fp2::Elt ax;
                i64 sum = 0;
                for (u64 id = 0; id < q; ++id) {
                    Fp2::Elt xel{id % p, id / p};
                    ax = F.mul(a, xel);
                    u64 v0 = bf.cube0[id] + ax.c0;
                    if (v0 >= p) v0 -= p;
                    v0 += b.c0;
                    if (v0 >= p) v0 -= p;
                    u64 v1 = bf.cube1[id] + ax.c1;
                    if (v1 >= p) v1 -= p;
                    v1 += b.c1;
                    if (v1 >= p) v1 -= p;
                    sum += bf.chi[v0 + p * v1];
                }
                return -sum;
            };
            for (u64 id = 1; id < q; ++id) {
                Fp2::Elt w{id % p, id / p};
                // diagonal model (w, w): singular iff 4w + 27 = 0
                Fp2::Elt lin = F.add(F.scale(four, w), F.make(i64(t27), 0));
                if (!F.is_zero(lin)) Tw[id] = fill(w, w);
                Ta[id] = fill(w, F.make(0, 0));   // y^2 = x^3 + ax, a != 0
                Tb[id] = fill(F.make(0, 0), w);   // y^2 = x^3 + b, b != 0
            }
            for (const Model& m : models) {
                Fp2::Elt A = reduce_pair(ra0[u64(m.a0 + int(bounds.A[0]))],
                                         ra1[u64(m.a1 + int(bounds.A[1]))]);
                Fp2::Elt B = reduce_pair(rb0[u64(m.b0 + int(bounds.B[0]))],
                                         rb1[u64(m.b1 + int(bounds.B[1]))]);
                u64 aid = bf.id_of(A);
                Fp2::Elt a3{bf.cube0[aid], bf.cube1[aid]};
                Fp2::Elt b2 = F.sqr(B);
                Fp2::Elt disc = F.add(F.scale(four, a3), F.scale(t27, b2));
                if (F.is_zero(disc)) continue;  // bad reduction at p
                i64 trace;
                if (F.is_zero(A)) {
                    trace = Tb[bf.id_of(B)];
                } else if (F.is_zero(B)) {
                    trace = Ta[aid];
                } else {
                    Fp2::Elt w = F.mul(a3, F.inv(b2));
                    i64 tw = Tw[bf.id_of(w)];
                    if (tw == kNoTrace) {
                        broken.store(true);
                        return 0;
                    }
                    trace = F.chi2(F.mul(A, B)) * tw;
                }
                if (trace == r) ++hits;
            }
        } else {
            // naive per-curve character sums, grouped by alpha so the x^3+ax
            // part is evaluated once per distinct alpha
            std::vector<u64> s0(q), s1(q);
            int cur_a0 = INT32_MIN, cur_a1 = INT32_MIN;
            Fp2::Elt A{0, 0}, four_a3{0, 0};
            for (const Model& m : models) {
                if (m.a0 != cur_a0 || m.a1 != cur_a1) {
                    cur_a0 = m.a0;
                    cur_a1 = m.a1;
                    A = reduce_pair(ra0[u64(m.a0 + int(bounds.A[0]))],
                                    ra1[u64(m.a1 + int(bounds.A[1]))]);
                    u64 aid = bf.id_of(A);
                    four_a3 = F.scale(four, Fp2::Elt{bf.cube0[aid], bf.cube1[aid]});
                    for (u64 id = 0; id < q; ++id) {
                        Fp2::Elt xel{id % p, id / p};
                        Fp2::Elt ax = F.mul(A, xel);
                        u64 v0 = bf.cube0[id] + ax.c0;
                        if (v0 >= p) v0 -= p;
                        u64 v1 = bf.cube1[id] + ax.c1;
                        if (v1 >= p) v1 -= p;
                        s0[id] = v0;
                        s1[id] = v1;
                    }
                }
                Fp2::Elt B = reduce_pair(rb0[u64(m.b0 + int(bounds.B[0]))],
                                         rb1[u64(m.b1 + int(bounds.B[1]))]);
                Fp2::Elt disc = F.add(four_a3, F.scale(t27, F.sqr(B)));
                if (F.is_zero(disc)) continue;
                i64 sum = 0;
                for (u64 id = 0; id < q; ++id) {
                    u64 v0 = s0[id] + B.c0;
                    if (v0 >= p) v0 -= p;
                    u64 v1 = s1[id] + B.c1;
                    if (v1 >= p) v1 -= p;
                    sum += bf.chi[v0 + p * v1];
                }
                if (-sum == r) ++hits;
            }
        }
        return hits;
    };

    auto hits = parallel_map<u64>(ps.size(), threads, count_for_prime);
    if (broken.load())
        throw std::logic_error("box: twist-orbit table missed a nonsingular model");

    BoxRun run;
    run.model_count = models.size();
    run.min_coordinate = std::min(std::min(bounds.A[0], bounds.A[1]),
                                  std::min(bounds.B[0], bounds.B[1]));
    u64 total = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        run.per_prime.push_back({ps[i], hits[i]});
        total += hits[i];
    }
    run.average = double(total) / double(run.model_count);
    return run;
}

AverageReport box_average(const GaloisProfile& profile, i64 r,
                          const BoxBounds& bounds, u64 x, unsigned threads,
                          BoxMethod method) {
    BoxRun run = box_run(profile, r, bounds, x, threads, method);
    AverageReport rep;
    rep.kind = "box";
    rep.grid.push_back({double(x), run.average});
    // slope prediction only exists for odd r (the constant engine's domain)
    if (r % 2 != 0) {
        ConstantBreakdown cb = constant_full(profile, r, "product");
        rep.predicted_slope = cb.value;
    }
    return rep;
}

}  // namespace frobavg
