#include "frobavg/galois.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace frobavg {

namespace {

using boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// dense polynomials over F_p (coefficients ascending, degree <= n_K stays tiny)
// ---------------------------------------------------------------------------

using Poly = std::vector<u64>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

Poly poly_mul(const Poly& a, const Poly& b, u64 p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + mulmod(a[i], b[j], p)) % p;
    }
    trim(c);
    return c;
}

// remainder of a by monic-normalized b
Poly poly_rem(Poly a, const Poly& b, u64 p) {
    trim(a);
    int db = degree(b);
    u64 inv_lead = powmod(b.back(), p - 2, p);
    while (degree(a) >= db) {
        u64 coef = mulmod(a.back(), inv_lead, p);
        int shift = degree(a) - db;
        for (int i = 0; i <= db; ++i) {
            u64 sub = mulmod(coef, b[i], p);
            a[i + shift] = (a[i + shift] + p - sub) % p;
        }
        trim(a);
    }
    return a;
}

Poly poly_gcd(Poly a, Poly b, u64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() != 1) {
        u64 inv = powmod(a.back(), p - 2, p);
        for (u64& c : a) c = mulmod(c, inv, p);
    }
    return a;
}

Poly poly_powmod(Poly base, u64 exp, const Poly& mod, u64 p) {
    Poly result{1};
    base = poly_rem(std::move(base), mod, p);
    while (exp) {
        if (exp & 1) result = poly_rem(poly_mul(result, base, p), mod, p);
        base = poly_rem(poly_mul(base, base, p), mod, p);
        exp >>= 1;
    }
    return result;
}

Poly derivative(const Poly& a, u64 p) {
    Poly d;
    for (size_t i = 1; i < a.size(); ++i) d.push_back(mulmod(a[i], i % p, p));
    trim(d);
    return d;
}

Poly reduce_mod_p(const std::vector<i64>& coeffs_const_first, u64 p) {
    // constant term first, implied leading coefficient 1
    Poly f(coeffs_const_first.size() + 1, 0);
    for (size_t i = 0; i < coeffs_const_first.size(); ++i) {
        i64 c = coeffs_const_first[i] % i64(p);
        if (c < 0) c += i64(p);
        f[i] = u64(c);
    }
    f.back() = 1;
    return f;
}

// ---------------------------------------------------------------------------
// exact polynomial discriminant via a Bareiss determinant of the Sylvester
// matrix of (f, f'); degree stays <= n_K so the matrix is tiny
// ---------------------------------------------------------------------------

cpp_int sylvester_resultant(const std::vector<cpp_int>& f, const std::vector<cpp_int>& g) {
    int m = static_cast<int>(f.size()) - 1;  // deg f
    int n = static_cast<int>(g.size()) - 1;  // deg g
    int size = m + n;
    if (size == 0) return 1;
    std::vector<std::vector<cpp_int>> M(size, std::vector<cpp_int>(size, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) M[i][i + j] = f[m - j];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) M[n + i][i + j] = g[n - j];

    // Bareiss fraction-free elimination
    cpp_int prev = 1;
    int sign = 1;
    for (int k = 0; k < size - 1; ++k) {
        if (M[k][k] == 0) {
            int swap_row = -1;
            for (int i = k + 1; i < size; ++i)
                if (M[i][k] != 0) { swap_row = i; break; }
            if (swap_row < 0) return 0;
            std::swap(M[k], M[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < size; ++i) {
            for (int j = k + 1; j < size; ++j) {
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
            }
            M[i][k] = 0;
        }
        prev = M[k][k];
    }
    return sign * M[size - 1][size - 1];
}

cpp_int poly_discriminant(const std::vector<i64>& coeffs_const_first) {
    int n = static_cast<int>(coeffs_const_first.size());  // degree (monic)
    std::vector<cpp_int> f(n + 1);
    for (int i = 0; i < n; ++i) f[i] = coeffs_const_first[i];
    f[n] = 1;
    std::vector<cpp_int> fp(n);
    for (int i = 1; i <= n; ++i) fp[i - 1] = f[i] * i;
    cpp_int res = sylvester_resultant(f, fp);
    // disc = (-1)^{n(n-1)/2} Res(f, f') / lc(f), lc = 1
    if (((u64(n) * (n - 1)) / 2) % 2 == 1) res = -res;
    return res;
}

// best-effort line lookup for loader diagnostics
int line_of_field(const std::string& raw, const std::string& field) {
    size_t pos = raw.find("\"" + field + "\"");
    if (pos == std::string::npos) return 0;
    return 1 + static_cast<int>(std::count(raw.begin(), raw.begin() + pos, '\n'));
}

[[noreturn]] void fail_field(const std::string& path, const std::string& raw,
                             const std::string& field, const std::string& what) {
    std::ostringstream os;
    os << path << ":" << line_of_field(raw, field) << ": " << field << " " << what;
    throw ProfileError(os.str());
}

}  // namespace

bool GaloisProfile::is_ramified(u64 p) const {
    return std::binary_search(ramified_primes.begin(), ramified_primes.end(), p);
}

void GaloisProfile::validate() const {
    if (m_K < 1) throw ProfileError("m_K must be positive");
    if (n_K < 1 || n_Kprime < 1 || n_K % n_Kprime != 0)
        throw ProfileError("n_Kprime must divide n_K");
    if (defining_poly.size() != n_K)
        throw ProfileError("defining_poly must have exactly n_K coefficients (constant first, leading 1 implied)");
    if (taus.empty()) throw ProfileError("taus must be nonempty");

    u64 coset_size = euler_phi(m_K);
    if (coset_size % n_Kprime != 0)
        throw ProfileError("n_Kprime does not divide phi(m_K)");
    coset_size /= n_Kprime;

    std::vector<u64> seen;
    u64 order2_c_total = 0;
    for (const TauClass& tau : taus) {
        if (tau.order != 1 && tau.order != 2) throw ProfileError("taus entries must have order 1 or 2");
        if (tau.S.empty()) throw ProfileError("taus S sets must be nonempty");
        if (tau.S.size() != coset_size)
            throw ProfileError("taus S sets must have size phi(m_K)/n_Kprime");
        for (u64 s : tau.S) {
            if (s >= m_K || std::gcd(s, m_K) != 1)
                throw ProfileError("taus S residues must lie in (Z/m_K)^x");
            if (std::find(seen.begin(), seen.end(), s) != seen.end())
                throw ProfileError("taus S sets must be disjoint");
            seen.push_back(s);
        }
        if (tau.order == 2) order2_c_total += tau.c_size;
    }
    if (order2_c_total > n_K)
        throw ProfileError("sum of c_size over order-2 taus exceeds n_K");

    for (u64 p : ramified_primes)
        if (!is_prime(p)) throw ProfileError("ramified_primes must contain primes only");
    if (!std::is_sorted(ramified_primes.begin(), ramified_primes.end()))
        throw ProfileError("ramified_primes must be ascending");

    for (auto [p, e] : factorize(m_K).factors) {
        (void)e;
        if (!is_ramified(p)) throw ProfileError("every prime dividing m_K must be in ramified_primes");
    }

    cpp_int disc = poly_discriminant(defining_poly);
    if (disc == 0) throw ProfileError("defining_poly is not squarefree over Q");
    cpp_int absd = disc < 0 ? -disc : disc;
    if (absd > cpp_int(UINT64_MAX))
        throw ProfileError("polynomial discriminant beyond 64-bit magnitude; rejected");
    for (auto [p, e] : factorize(absd.convert_to<u64>()).factors) {
        (void)e;
        if (!is_ramified(p))
            throw ProfileError("prime dividing the polynomial discriminant missing from ramified_primes");
    }

    // Degree-pattern sanity at the first unramified primes: frobenius_degree
    // itself rejects mixed degrees (a reducible polynomial with differing
    // splitting data cannot survive this for long).
    int checked = 0;
    for (u64 p = 2; checked < 25; ++p) {
        if (!is_prime(p) || is_ramified(p)) continue;
        int f = frobenius_degree(*this, p);
        if (n_K % u64(f) != 0)
            throw ProfileError("factor degree does not divide n_K");
        ++checked;
    }
}

GaloisProfile preset(const std::string& name) {
    GaloisProfile gp;
    if (name == "qi") {
        gp.name = "qi";
        gp.m_K = 4;
        gp.n_K = 2;
        gp.n_Kprime = 2;
        gp.defining_poly = {1, 0};  // x^2 + 1
        gp.taus = {{1, {1}, 0}, {2, {3}, 1}};
        gp.ramified_primes = {2};
    } else if (name == "qsqrt-3") {
        gp.name = "qsqrt-3";
        gp.m_K = 3;
        gp.n_K = 2;
        gp.n_Kprime = 2;
        gp.defining_poly = {1, -1};  // x^2 - x + 1, the conductor-3 cyclotomic field
        gp.taus = {{1, {1}, 0}, {2, {2}, 1}};
        gp.ramified_primes = {3};
    } else if (name == "s3x3m2") {
        // Splitting field of x^3 - 2: minimal polynomial of 2^{1/3} + zeta_3,
        // Galois group S_3, K' = Q(zeta_3).  C_tau for the nontrivial tau is
        // the three transpositions; A_3 has no order-two elements.
        gp.name = "s3x3m2";
        gp.m_K = 3;
        gp.n_K = 6;
        gp.n_Kprime = 2;
        gp.defining_poly = {9, 9, 0, 3, 6, 3};  // x^6+3x^5+6x^4+3x^3+9x+9
        gp.taus = {{1, {1}, 0}, {2, {2}, 3}};
        gp.ramified_primes = {2, 3};
    } else {
        throw ProfileError("unknown preset '" + name + "' (known: qi, qsqrt-3, s3x3m2)");
    }
    gp.validate();
    return gp;
}

GaloisProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProfileError("cannot open profile file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string raw = buffer.str();

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error& e) {
        throw ProfileError(path + ": " + e.what());
    }

    GaloisProfile gp;
    auto require = [&](const char* field) -> const nlohmann::json& {
        if (!j.contains(field)) fail_field(path, raw, field, "is missing");
        return j.at(field);
    };
    try {
        gp.name = require("name").get<std::string>();
        gp.m_K = require("m_K").get<u64>();
        gp.n_K = require("n_K").get<u64>();
        gp.n_Kprime = require("n_Kprime").get<u64>();
        gp.defining_poly = require("defining_poly").get<std::vector<i64>>();
        for (const auto& jt : require("taus")) {
            TauClass tau;
            if (!jt.contains("order") || !jt.contains("S") || !jt.contains("c_size"))
                fail_field(path, raw, "taus", "entries need order, S, c_size");
            tau.order = jt.at("order").get<int>();
            tau.S = jt.at("S").get<std::vector<u64>>();
            std::sort(tau.S.begin(), tau.S.end());
            tau.c_size = jt.at("c_size").get<u64>();
            gp.taus.push_back(std::move(tau));
        }
        gp.ramified_primes = require("ramified_primes").get<std::vector<u64>>();
        std::sort(gp.ramified_primes.begin(), gp.ramified_primes.end());
    } catch (const nlohmann::json::exception& e) {
        throw ProfileError(path + ": malformed field: " + e.what());
    }

    try {
        gp.validate();
    } catch (const ProfileError& e) {
        // attach a best-effort location of the field named first in the message
        std::string msg = e.what();
        std::string field;
        for (const char* candidate :
             {"defining_poly", "ramified_primes", "n_Kprime", "taus", "m_K", "n_K"}) {
            if (msg.find(candidate) != std::string::npos) { field = candidate; break; }
        }
        if (field.empty()) throw ProfileError(path + ": " + msg);
        std::ostringstream os;
        os << path << ":" << line_of_field(raw, field) << ": " << msg;
        throw ProfileError(os.str());
    }
    return gp;
}

u64 phi_K(const GaloisProfile& profile, u64 q) {
    if (q == 0 || q % profile.m_K != 0)
        throw std::invalid_argument("phi_K: q must be a positive multiple of m_K");
    u64 phi = euler_phi(q);
    if (phi % profile.n_Kprime != 0)
        throw ProfileError("phi_K: n_Kprime does not divide phi(q); corrupt profile");
    return phi / profile.n_Kprime;
}

int frobenius_degree(const GaloisProfile& profile, u64 p) {
    if (!is_prime(p)) throw std::invalid_argument("frobenius_degree: p must be prime");
    if (profile.is_ramified(p))
        throw std::invalid_argument("frobenius_degree: p is ramified");

    Poly f = reduce_mod_p(profile.defining_poly, p);
    if (degree(poly_gcd(f, derivative(f, p), p)) > 0)
        throw ProfileError("defining_poly not squarefree mod an unramified prime; profile invalid");

    // distinct-degree staircase: gcd(x^{p^d} - x, remaining)
    Poly remaining = f;
    Poly h{0, 1};  // x
    int found_degree = 0;
    for (int d = 1; 2 * d <= degree(remaining); ++d) {
        h = poly_powmod(h, p, f, p);
        Poly diff = h;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(diff);
        Poly g = poly_gcd(diff, remaining, p);
        if (degree(g) > 0) {
            if (degree(g) % d != 0)
                throw ProfileError("distinct-degree factorization inconsistency");
            if (found_degree && found_degree != d)
                throw ProfileError("mixed factor degrees mod p; polynomial does not define a Galois field");
            found_degree = d;
            // exact long division remaining / g (g is monic after poly_gcd)
            Poly quotient(std::max<int>(0, degree(remaining) - degree(g) + 1), 0);
            Poly num = remaining;
            int dg = degree(g);
            while (!num.empty() && degree(num) >= dg) {
                int shift = degree(num) - dg;
                u64 coef = num.back();
                quotient[shift] = coef;
                for (int i = 0; i <= dg; ++i) {
                    u64 sub = mulmod(coef, g[i], p);
                    num[i + shift] = (num[i + shift] + p - sub) % p;
                }
                trim(num);
            }
            remaining = std::move(quotient);
            trim(remaining);
        }
    }
    if (degree(remaining) > 0) {
        int d = degree(remaining);
        if (found_degree && found_degree != d)
            throw ProfileError("mixed factor degrees mod p; polynomial does not define a Galois field");
        found_degree = d;
    }
    if (found_degree == 0)
        throw ProfileError("distinct-degree factorization found no factors");
    return found_degree;
}

std::optional<size_t> tau_of_prime(const GaloisProfile& profile, u64 p) {
    if (profile.is_ramified(p))
        throw std::invalid_argument("tau_of_prime: p is ramified");
    u64 residue = p % profile.m_K;
    for (size_t i = 0; i < profile.taus.size(); ++i) {
        const auto& S = profile.taus[i].S;
        if (std::binary_search(S.begin(), S.end(), residue)) return i;
    }
    return std::nullopt;
}

PretentiousReport validate_pretentious(const GaloisProfile& profile, u64 p_limit) {
    PretentiousReport report;
    report.p_limit = p_limit;
    PrimeTable table(p_limit);
    for (u64 p : table.primes) {
        if (profile.is_ramified(p)) continue;
        int f = frobenius_degree(profile, p);
        std::optional<size_t> ti = tau_of_prime(profile, p);
        bool congruence_says_two =
            ti.has_value() && profile.taus[*ti].order == 2 && profile.taus[*ti].c_size > 0;
        ++report.checked;
        if ((f == 2) != congruence_says_two) {
            PretentiousViolation v;
            v.p = p;
            v.frob_deg = f;
            v.tau_order = ti ? profile.taus[*ti].order : 0;
            v.c_size = ti ? profile.taus[*ti].c_size : 0;
            report.violations.push_back(v);
        }
    }
    return report;
}

}  // namespace frobavg
