// frobavg: command-line surface over the library modules.
//
// Subcommands: hurwitz, lseries, deuring, histogram, constant,
// constant-simplified, constant-ss, average, a-series, box-average, bdh,
// profile-check.  Every run echoes its resolved configuration (CSV: leading
// '#' comment lines; JSON: a "config" object).  Exit codes: 0 success,
// 2 validation error (bad flags, invalid profile, precondition failures),
// 3 internal invariant violation.
//
// Output is byte-identical for identical configs regardless of --threads:
// all parallel reductions in the library merge in a fixed order.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "frobavg/arith.hpp"
#include "frobavg/average.hpp"
#include "frobavg/constant.hpp"
#include "frobavg/curves.hpp"
#include "frobavg/galois.hpp"
#include "frobavg/lfun.hpp"
#include "frobavg/quadform.hpp"

namespace {

using frobavg::i64;
using frobavg::u64;
using json = nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

using KV = std::vector<std::pair<std::string, std::string>>;

struct Sink {
    std::ofstream file;
    std::ostream* os = &std::cout;

    void open(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw std::invalid_argument("out: cannot open " + path);
        os = &file;
    }
    std::ostream& out() { return *os; }
};

struct CommonOpts {
    std::string preset_name;
    std::string profile_path;
    std::string out_path;
    std::string format = "csv";
    unsigned threads = 1;
};

void add_common(CLI::App* cmd, const std::shared_ptr<CommonOpts>& c,
                bool with_profile) {
    if (with_profile) {
        cmd->add_option("--preset", c->preset_name,
                        "preset field: qi, qsqrt-3, s3x3m2");
        cmd->add_option("--profile", c->profile_path,
                        "path to a JSON field profile (overrides --preset)");
    }
    cmd->add_option("--threads", c->threads, "worker threads (0 = all cores)");
    cmd->add_option("--out", c->out_path, "write to this path instead of stdout");
    cmd->add_option("--format", c->format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

frobavg::GaloisProfile resolve_profile(const CommonOpts& c) {
    if (!c.profile_path.empty()) return frobavg::load_profile(c.profile_path);
    if (!c.preset_name.empty()) return frobavg::preset(c.preset_name);
    throw std::invalid_argument("profile: --preset or --profile is required");
}

void common_kv(KV& kv, const std::string& command, const CommonOpts& c) {
    kv.emplace_back("command", command);
    if (!c.preset_name.empty()) kv.emplace_back("preset", c.preset_name);
    if (!c.profile_path.empty()) kv.emplace_back("profile", c.profile_path);
    kv.emplace_back("threads", std::to_string(c.threads));
    kv.emplace_back("format", c.format);
}

void emit_csv_config(std::ostream& os, const KV& kv) {
    os << "#";
    for (const auto& [k, v] : kv) os << " " << k << "=" << v;
    os << "\n";
}

json config_json(const KV& kv) {
    json j = json::object();
    for (const auto& [k, v] : kv) j[k] = v;
    return j;
}

// ---------------------------------------------------------------------------
// subcommand runners
// ---------------------------------------------------------------------------

void run_hurwitz(const CommonOpts& c, i64 D) {
    auto hv = frobavg::hurwitz(D);
    KV kv;
    common_kv(kv, "hurwitz", c);
    kv.emplace_back("D", std::to_string(D));
    Sink sink;
    sink.open(c.out_path);
    if (c.format == "csv") {
        emit_csv_config(sink.out(), kv);
        sink.out() << "D,num,den\n"
                   << D << "," << hv.value.num() << "," << hv.value.den()
                   << "\n";
    } else {
        json j;
        j["config"] = config_json(kv);
        j["D"] = D;
        j["value"] = hv.value.str();
        json terms = json::array();
        for (const auto& t : hv.terms)
            terms.push_back({{"k", t.k}, {"h", t.h}, {"w", t.w}});
        j["terms"] = terms;
        sink.out() << j.dump(2) << "\n";
    }
}

void run_lseries(const CommonOpts& c, i64 d, double rel, u64 y) {
    frobavg::LValue lv = (y > 0) ? frobavg::l_at(d, y) : frobavg::l_one(d, rel);
    KV kv;
    common_kv(kv, "lseries", c);
    kv.emplace_back("d", std::to_string(d));
    if (y > 0)
        kv.emplace_back("y", std::to_string(y));
    else
        kv.emplace_back("rel", fmt(rel));
    Sink sink;
    sink.open(c.out_path);
    if (c.format == "csv") {
        emit_csv_config(sink.out(), kv);
        sink.out() << "d,y,value,tail_bound\n"
                   << d << "," << lv.y << "," << fmt(lv.value) << ","
                   << fmt(lv.tail_bound) << "\n";
    } else {
        json j;
        j["config"] = config_json(kv);
        j["d"] = d;
        j["y"] = lv.y;
        j["value"] = lv.value;
        j["tail_bound"] = lv.tail_bound;
        sink.out() << j.dump(2) << "\n";
    }
}

void run_deuring(const CommonOpts& c, u64 p, i64 r) {
    auto res = frobavg::deuring_check(p, r, c.threads);
    KV kv;
    common_kv(kv, "deuring", c);
    kv.emplace_back("p", std::to_string(p));
    kv.emplace_back("r", std::to_string(r));
    Sink sink;
    sink.open(c.out_path);
    if (c.format == "csv") {
        emit_csv_config(sink.out(), kv);
        sink.out() << "p,r,lhs,rhs,equal\n"
                   << p << "," << r << "," << res.lhs.str() << ","
                   << res.rhs.str() << "," << (res.equal ? "true" : "false")
                   << "\n";
    } else {
        json j;
        j["config"] = config_json(kv);
        j["p"] = p;
        j["r"] = r;
        j["lhs"] = res.lhs.str();
        j["rhs"] = res.rhs.str();
        j["equal"] = res.equal;
        sink.out() << j.dump(2) << "\n";
    }
}

void run_histogram(const CommonOpts& c, u64 p, u64 p_max,
                   const std::string& slice) {
    auto hist = frobavg::trace_histogram(p, c.threads, p_max);
    if (slice == "ss") hist = frobavg::supersingular_slice(hist);
    KV kv;
    common_kv(kv, "histogram", c);
    kv.emplace_back("p", std::to_string(p));
    kv.emplace_back("p_max", std::to_string(p_max));
    kv.emplace_back("slice", slice);
    Sink sink;
    sink.open(c.out_path);
    if (c.format == "csv") {
        emit_csv_config(sink.out(), kv);
        sink.out() << "p,trace,models,weighted_num,weighted_den\n";
        for (const auto& [trace, count] : hist.models) {
            auto w = hist.weighted(trace);
            sink.out() << p << "," << trace << "," << count << "," << w.num()
                       << "," << w.den() << "\n";
        }
    } else {
        json j;
        j["config"] = config_json(kv);
        j["p"] = p;
        json rows = json::array();
        for (const auto& [trace, count] : hist.models)
            rows.push_back({{"trace", trace},
                            {"models", count},
                            {"weighted", hist.weighted(trace).str()}});
        j["rows"] = rows;
        j["weighted_total"] = hist.weighted_total().str();
        sink.out() << j.dump(2) << "\n";
    }
}

json breakdown_json(const frobavg::ConstantBreakdown& b) {
    json j;
    j["route"] = b.route;
    j["value"] = b.value;
    j["trunc_error"] = b.trunc_error;
    j["U"] = b.U;
    j["V"] = b.V;
    j["ell_max"] = b.ell_max;
    json taus = json::array();
    for (const auto& t : b.per_tau)
        taus.push_back(
            {{"order", t.order}, {"c_size", t.c_size}, {"value", t.value}});
    j["per_tau"] = taus;
    json gs = json::array();
    for (const auto& g : b.per_g)
        gs.push_back({{"g", g.g}, {"value", g.value}});
    j["per_g"] = gs;
    j["warning_no_order2"] = b.warning_no_order2;
    return j;
}

void run_constant(const CommonOpts& c, i64 r, const std::string& route, u64 U,
                  u64 V, u64 ell_max) {
    auto profile = resolve_profile(c);
    std::vector<frobavg::ConstantBreakdown> results;
    if (route == "series" || route == "both")
        results.push_back(frobavg::constant_full(profile, r, "series", U, V,
                                                 ell_max, c.threads));
    if (route == "product" || route == "both")
        results.push_back(frobavg::constant_full(profile, r, "product", U, V,
                                                 ell_max, c.threads));
    bool have_overlap = results.size() == 2;
    bool overlap = false;
    if (have_overlap) {
        double gap = results[0].value - results[1].value;
        if (gap < 0) gap = -gap;
        overlap = gap <= results[0].trunc_error + results[1].trunc_error;
    }
    KV kv;
    common_kv(kv, "constant", c);
    kv.emplace_back("field", profile.name);
    kv.emplace_back("r", std::to_string(r));
    kv.emplace_back("route", route);
    kv.emplace_back("U", std::to_string(U));
    kv.emplace_back("V", std::to_string(V));
    kv.emplace_back("ell_max", std::to_string(ell_max));
    Sink sink;
    sink.open(c.out_path);
    if (c.format == "csv") {
        emit_csv_config(sink.out(), kv);
        sink.out() << "route,value,trunc_error,overlap\n";
        for (const auto& b : results)
            sink.out() << b.route << "," << fmt(b.value) << ","
                       << fmt(b.trunc_error) << ","
                       << (have_overlap ? (overlap ? "true" : "false") : "")
                       << "\n";
    } else {
        json j;
        j["config"] = config_json(kv);
        json rs = json::array();
        for (const auto& b : results) rs.push_back(breakdown_json(b));
        j["results"] = rs;
        if (have_overlap) j["overlap"] = overlap;
        sink.out() << j.dump(2) << "\n";
    }
}

void run_constant_simplified(const CommonOpts& c, i64 r, u64 ell_max) {
    auto profile = resolve_profile(c);
    double v = frobavg::constant_simplified(profile, r, ell_max);
    KV kv;
    common_kv(kv, "constant-simplified", c);
    kv.emplace_back("field", profile.name);
    kv.emplace_back("r", std::to_string(r));
    kv.emplace_back("ell_max", std::to_string(ell_max));
    Sink sink;
    sink.open(c.out_path);
    if (c.format == "csv") {
        emit_csv_config(sink.out(), kv);
        sink.out() << "r,value\n" << r << "," << fmt(v) << "\n";
    } else {
        json j;
        j["config"] = config_json(kv);
        j["r"] = r;
        j["value"] = v;
        sink.out() << j.dump(2) << "\n";
    }
}

void run_constant_ss(const CommonOpts& c) {
    auto profile = resolve_profile(c);
    frobavg::Rational v = frobavg::constant_supersingular(profile);
    KV kv;
    common_kv(kv, "constant-ss", c);
    kv.emplace_back("field", profile.name);
    Sink sink;
    sink.open(c.out_path);
    if (c.format == "csv") {
        emit_csv_config(sink.out(), kv);
        sink.out() << "num,den\n" << v.num() << "," << v.den() << "\n";
    } else {
        json j;
        j["config"] = config_json(kv);
        j["value"] = v.str();
        sink.out() << j.dump(2) << "\n";
    }
}

void emit_report_csv(std::ostream& os, const frobavg::AverageReport& rep) {
    os << "kind,x_or_T,empirical,predicted_slope,residual\n";
    for (std::size_t i = 0; i < rep.grid.size(); ++i) {
        os << rep.kind << "," << fmt(rep.grid[i].x) << ","
           << fmt(rep.grid[i].empirical) << "," << fmt(rep.predicted_slope)
           << ",";
        if (i > 0 && i - 1 < rep.fit_residuals.size())
            os << fmt(rep.fit_residuals[i - 1]);
        os << "\n";
    }
}

json report_json(const frobavg::AverageReport& rep) {
    json j;
    j["kind"] = rep.kind;
    json grid = json::array();
    for (const auto& g : rep.grid)
        grid.push_back({{"x", g.x}, {"empirical", g.empirical}});
    j["grid"] = grid;
    j["predicted_slope"] = rep.predicted_slope;
    j["fit_residuals"] = rep.fit_residuals;
    return j;
}

void run_average(const CommonOpts& c, i64 r, const std::vector<u64>& grid) {
    auto profile = resolve_profile(c);
    auto rep = frobavg::class_sum_average(profile, r, grid, c.threads);
    KV kv;
    common_kv(kv, "average", c);
    kv.emplace_back("field", profile.name);
    kv.emplace_back("r", std::to_string(r));
    std::string g;
    for (u64 x : grid) g += (g.empty() ? "" : ";") + std::to_string(x);
    kv.emplace_back("grid", g);
    Sink sink;
    sink.open(c.out_path);
    if (c.format == "csv") {
        emit_csv_config(sink.out(), kv);
        emit_report_csv(sink.out(), rep);
    } else {
        json j;
        j["config"] = config_json(kv);
        j["report"] = report_json(rep);
        sink.out() << j.dump(2) << "\n";
    }
}

void run_a_series(const CommonOpts& c, i64 r, const std::vector<u64>& grid,
                  double rel) {
    auto profile = resolve_profile(c);
    auto rep = frobavg::a_series_report(profile, r, grid, rel, c.threads);
    KV kv;
    common_kv(kv, "a-series", c);
    kv.emplace_back("field", profile.name);
    kv.emplace_back("r", std::to_string(r));
    std::string g;
    for (u64 t : grid) g += (g.empty() ? "" : ";") + std::to_string(t);
    kv.emplace_back("T_grid", g);
    kv.emplace_back("rel", fmt(rel));
    Sink sink;
    sink.open(c.out_path);
    if (c.format == "csv") {
        emit_csv_config(sink.out(), kv);
        emit_report_csv(sink.out(), rep);
    } else {
        json j;
        j["config"] = config_json(kv);
        j["report"] = report_json(rep);
        sink.out() << j.dump(2) << "\n";
    }
}

frobavg::BoxBounds parse_bounds(const std::vector<u64>& A,
                                const std::vector<u64>& B) {
    auto pick = [](const std::vector<u64>& v, const char* name) {
        if (v.size() == 1) return std::array<u64, 2>{v[0], v[0]};
        if (v.size() == 2) return std::array<u64, 2>{v[0], v[1]};
        throw std::invalid_argument(std::string(name) +
                                    ": give one bound or two (comma list)");
    };
    frobavg::BoxBounds b;
    b.A = pick(A, "A");
    b.B = pick(B, "B");
    return b;
}

void run_box(const CommonOpts& c, i64 r, const std::vector<u64>& A,
             const std::vector<u64>& B, u64 x, const std::string& method) {
    auto profile = resolve_profile(c);
    auto bounds = parse_bounds(A, B);
    auto m = method == "per-curve" ? frobavg::BoxMethod::per_curve
                                   : frobavg::BoxMethod::trace_table;
    auto run = frobavg::box_run(profile, r, bounds, x, c.threads, m);
    frobavg::AverageReport rep;
    rep.kind = "box";
    rep.grid.push_back({double(x), run.average});
    if (r % 2 != 0)
        rep.predicted_slope =
            frobavg::constant_full(profile, r, "product").value;
    KV kv;
    common_kv(kv, "box-average", c);
    kv.emplace_back("field", profile.name);
    kv.emplace_back("r", std::to_string(r));
    kv.emplace_back("A", std::to_string(bounds.A[0]) + ";" +
                             std::to_string(bounds.A[1]));
    kv.emplace_back("B", std::to_string(bounds.B[0]) + ";" +
                             std::to_string(bounds.B[1]));
    kv.emplace_back("x", std::to_string(x));
    kv.emplace_back("method", method);
    Sink sink;
    sink.open(c.out_path);
    if (c.format == "csv") {
        emit_csv_config(sink.out(), kv);
        emit_report_csv(sink.out(), rep);
    } else {
        json j;
        j["config"] = config_json(kv);
        j["report"] = report_json(rep);
        j["model_count"] = run.model_count;
        j["min_coordinate"] = run.min_coordinate;
        json pp = json::array();
        for (const auto& pc : run.per_prime)
            pp.push_back({{"p", pc.p}, {"hits", pc.hits}});
        j["per_prime"] = pp;
        sink.out() << j.dump(2) << "\n";
    }
}

void run_bdh(const CommonOpts& c, u64 x, u64 Q, std::size_t tau,
             bool emit_cells) {
    auto profile = resolve_profile(c);
    auto rep = frobavg::bdh_error(profile, x, Q, tau, c.threads);
    KV kv;
    common_kv(kv, "bdh", c);
    kv.emplace_back("field", profile.name);
    kv.emplace_back("x", std::to_string(x));
    kv.emplace_back("Q", std::to_string(Q));
    kv.emplace_back("tau", std::to_string(tau));
    Sink sink;
    sink.open(c.out_path);
    if (c.format == "csv") {
        emit_csv_config(sink.out(), kv);
        if (emit_cells) {
            sink.out() << "q,a,theta,expected\n";
            for (const auto& cell : rep.cells)
                sink.out() << cell.q << "," << cell.a << "," << fmt(cell.theta)
                           << "," << fmt(cell.expected) << "\n";
        } else {
            sink.out() << "x,Q,tau_index,cells,error_sum\n"
                       << rep.x << "," << rep.Q << "," << rep.tau_index << ","
                       << rep.cells.size() << "," << fmt(rep.error_sum) << "\n";
        }
    } else {
        json j;
        j["config"] = config_json(kv);
        j["x"] = rep.x;
        j["Q"] = rep.Q;
        j["tau_index"] = rep.tau_index;
        j["cell_count"] = rep.cells.size();
        j["error_sum"] = rep.error_sum;
        if (emit_cells) {
            json cells = json::array();
            for (const auto& cell : rep.cells)
                cells.push_back({{"q", cell.q},
                                 {"a", cell.a},
                                 {"theta", cell.theta},
                                 {"expected", cell.expected}});
            j["cells"] = cells;
        }
        sink.out() << j.dump(2) << "\n";
    }
}

void run_profile_check(const CommonOpts& c, u64 p_limit) {
    auto profile = resolve_profile(c);
    auto rep = frobavg::validate_pretentious(profile, p_limit);
    KV kv;
    common_kv(kv, "profile-check", c);
    kv.emplace_back("field", profile.name);
    kv.emplace_back("p_limit", std::to_string(p_limit));
    Sink sink;
    sink.open(c.out_path);
    if (c.format == "csv") {
        emit_csv_config(sink.out(), kv);
        sink.out() << "# checked=" << rep.checked
                   << " violations=" << rep.violations.size() << "\n";
        sink.out() << "p,frob_deg,tau_order,c_size\n";
        for (const auto& v : rep.violations)
            sink.out() << v.p << "," << v.frob_deg << "," << v.tau_order << ","
                       << v.c_size << "\n";
    } else {
        json j;
        j["config"] = config_json(kv);
        j["checked"] = rep.checked;
        json vs = json::array();
        for (const auto& v : rep.violations)
            vs.push_back({{"p", v.p},
                          {"frob_deg", v.frob_deg},
                          {"tau_order", v.tau_order},
                          {"c_size", v.c_size}});
        j["violations"] = vs;
        sink.out() << j.dump(2) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "frobavg: average trace-of-Frobenius statistics for degree-two primes "
        "of Galois number fields"};
    app.require_subcommand(1);

    // hurwitz
    auto c_hur = std::make_shared<CommonOpts>();
    auto d_hur = std::make_shared<i64>(0);
    {
        auto* cmd = app.add_subcommand(
            "hurwitz", "Hurwitz class number H(D). CSV: D,num,den");
        cmd->add_option("--D", *d_hur, "negative discriminant, 0 or 1 mod 4")
            ->required();
        add_common(cmd, c_hur, false);
        cmd->callback([=] { run_hurwitz(*c_hur, *d_hur); });
    }

    // lseries
    auto c_ls = std::make_shared<CommonOpts>();
    auto d_ls = std::make_shared<i64>(0);
    auto rel_ls = std::make_shared<double>(1e-3);
    auto y_ls = std::make_shared<u64>(0);
    {
        auto* cmd = app.add_subcommand(
            "lseries",
            "L(1, chi_d) by truncated character sum. CSV: d,y,value,tail_bound");
        cmd->add_option("--d", *d_ls, "discriminant, 0 or 1 mod 4")->required();
        cmd->add_option("--rel", *rel_ls,
                        "relative error target (picks the truncation)");
        cmd->add_option("--y", *y_ls, "explicit truncation length (overrides --rel)");
        add_common(cmd, c_ls, false);
        cmd->callback([=] { run_lseries(*c_ls, *d_ls, *rel_ls, *y_ls); });
    }

    // deuring
    auto c_de = std::make_shared<CommonOpts>();
    auto p_de = std::make_shared<u64>(0);
    auto r_de = std::make_shared<i64>(0);
    {
        auto* cmd = app.add_subcommand(
            "deuring",
            "Exact mass identity weighted(r) = H(r^2-4p^2) over F_{p^2}. "
            "CSV: p,r,lhs,rhs,equal");
        cmd->add_option("--p", *p_de, "prime > 3")->required();
        cmd->add_option("--r", *r_de, "trace value, p must not divide r")
            ->required();
        add_common(cmd, c_de, false);
        cmd->callback([=] { run_deuring(*c_de, *p_de, *r_de); });
    }

    // histogram
    auto c_hi = std::make_shared<CommonOpts>();
    auto p_hi = std::make_shared<u64>(0);
    auto pmax_hi = std::make_shared<u64>(37);
    auto slice_hi = std::make_shared<std::string>("all");
    {
        auto* cmd = app.add_subcommand(
            "histogram",
            "Full trace histogram over F_{p^2}. CSV: "
            "p,trace,models,weighted_num,weighted_den");
        cmd->add_option("--p", *p_hi, "prime > 3")->required();
        cmd->add_option("--p-max", *pmax_hi,
                        "refuse primes above this bound (cost is O(p^6))");
        cmd->add_option("--slice", *slice_hi, "all or ss (supersingular)")
            ->check(CLI::IsMember({"all", "ss"}));
        add_common(cmd, c_hi, false);
        cmd->callback([=] { run_histogram(*c_hi, *p_hi, *pmax_hi, *slice_hi); });
    }

    // constant
    auto c_co = std::make_shared<CommonOpts>();
    auto r_co = std::make_shared<i64>(1);
    auto route_co = std::make_shared<std::string>("both");
    auto U_co = std::make_shared<u64>(frobavg::kDefaultU);
    auto V_co = std::make_shared<u64>(frobavg::kDefaultV);
    auto lm_co = std::make_shared<u64>(frobavg::kDefaultEllMax);
    {
        auto* cmd = app.add_subcommand(
            "constant",
            "Average Lang-Trotter constant via the triple-sum series and/or "
            "the Euler product. CSV: route,value,trunc_error,overlap");
        cmd->add_option("--r", *r_co, "odd trace")->required();
        cmd->add_option("--route", *route_co, "series, product, or both")
            ->check(CLI::IsMember({"series", "product", "both"}));
        cmd->add_option("--U", *U_co, "series truncation for k^2*n");
        cmd->add_option("--V", *V_co, "series truncation for k");
        cmd->add_option("--ell-max", *lm_co, "Euler product prime cutoff");
        add_common(cmd, c_co, true);
        cmd->callback(
            [=] { run_constant(*c_co, *r_co, *route_co, *U_co, *V_co, *lm_co); });
    }

    // constant-simplified
    auto c_cs = std::make_shared<CommonOpts>();
    auto r_cs = std::make_shared<i64>(1);
    auto lm_cs = std::make_shared<u64>(frobavg::kDefaultEllMax);
    {
        auto* cmd = app.add_subcommand(
            "constant-simplified",
            "Closed-form constant for fields whose odd ramified primes all "
            "divide r. CSV: r,value");
        cmd->add_option("--r", *r_cs, "odd trace")->required();
        cmd->add_option("--ell-max", *lm_cs, "Euler product prime cutoff");
        add_common(cmd, c_cs, true);
        cmd->callback([=] { run_constant_simplified(*c_cs, *r_cs, *lm_cs); });
    }

    // constant-ss
    auto c_ss = std::make_shared<CommonOpts>();
    {
        auto* cmd = app.add_subcommand(
            "constant-ss",
            "Supersingular (r = 0) constant #C/(12 n_K), exact. CSV: num,den");
        add_common(cmd, c_ss, true);
        cmd->callback([=] { run_constant_ss(*c_ss); });
    }

    // average
    auto c_av = std::make_shared<CommonOpts>();
    auto r_av = std::make_shared<i64>(1);
    auto grid_av = std::make_shared<std::vector<u64>>();
    {
        auto* cmd = app.add_subcommand(
            "average",
            "Class-number route (n_K/2) sum H(r^2-4p^2)/p^2 over an x grid. "
            "CSV: kind,x_or_T,empirical,predicted_slope,residual");
        cmd->add_option("--r", *r_av, "trace")->required();
        cmd->add_option("--grid", *grid_av, "ascending x values")
            ->required()
            ->delimiter(',');
        add_common(cmd, c_av, true);
        cmd->callback([=] { run_average(*c_av, *r_av, *grid_av); });
    }

    // a-series
    auto c_as = std::make_shared<CommonOpts>();
    auto r_as = std::make_shared<i64>(1);
    auto grid_as = std::make_shared<std::vector<u64>>();
    auto rel_as = std::make_shared<double>(0.1);
    {
        auto* cmd = app.add_subcommand(
            "a-series",
            "A(T; r) = sum L(1,chi)*log(p)/k over degree-2 primes and square "
            "divisors. CSV: kind,x_or_T,empirical,predicted_slope,residual");
        cmd->add_option("--r", *r_as, "odd trace")->required();
        cmd->add_option("--T-grid", *grid_as, "ascending T values")
            ->required()
            ->delimiter(',');
        cmd->add_option("--rel", *rel_as, "relative error for L-values");
        add_common(cmd, c_as, true);
        cmd->callback([=] { run_a_series(*c_as, *r_as, *grid_as, *rel_as); });
    }

    // box-average
    auto c_bo = std::make_shared<CommonOpts>();
    auto r_bo = std::make_shared<i64>(1);
    auto A_bo = std::make_shared<std::vector<u64>>();
    auto B_bo = std::make_shared<std::vector<u64>>();
    auto x_bo = std::make_shared<u64>(0);
    auto meth_bo = std::make_shared<std::string>("table");
    {
        auto* cmd = app.add_subcommand(
            "box-average",
            "Direct model-box simulation over an imaginary-quadratic ring. "
            "CSV: kind,x_or_T,empirical,predicted_slope,residual");
        cmd->add_option("--r", *r_bo, "trace")->required();
        cmd->add_option("--A", *A_bo, "alpha coordinate bounds (one or two)")
            ->required()
            ->delimiter(',');
        cmd->add_option("--B", *B_bo, "beta coordinate bounds (one or two)")
            ->required()
            ->delimiter(',');
        cmd->add_option("--x", *x_bo, "norm bound (<= 10^4)")->required();
        cmd->add_option("--method", *meth_bo, "table or per-curve")
            ->check(CLI::IsMember({"table", "per-curve"}));
        add_common(cmd, c_bo, true);
        cmd->callback(
            [=] { run_box(*c_bo, *r_bo, *A_bo, *B_bo, *x_bo, *meth_bo); });
    }

    // bdh
    auto c_bd = std::make_shared<CommonOpts>();
    auto x_bd = std::make_shared<u64>(0);
    auto Q_bd = std::make_shared<u64>(1);
    auto tau_bd = std::make_shared<std::size_t>(0);
    auto cells_bd = std::make_shared<bool>(false);
    {
        auto* cmd = app.add_subcommand(
            "bdh",
            "Average square error of theta(x; tau, q, a) over q <= Q. CSV "
            "summary: x,Q,tau_index,cells,error_sum; with --emit-cells: "
            "q,a,theta,expected");
        cmd->add_option("--x", *x_bd, "prime bound")->required();
        cmd->add_option("--Q", *Q_bd, "modulus bound")->required();
        cmd->add_option("--tau", *tau_bd, "splitting-class index")->required();
        cmd->add_flag("--emit-cells", *cells_bd, "emit every (q, a) cell");
        add_common(cmd, c_bd, true);
        cmd->callback([=] { run_bdh(*c_bd, *x_bd, *Q_bd, *tau_bd, *cells_bd); });
    }

    // profile-check
    auto c_pc = std::make_shared<CommonOpts>();
    auto pl_pc = std::make_shared<u64>(10000);
    {
        auto* cmd = app.add_subcommand(
            "profile-check",
            "Validate a field profile and compare the factorization route "
            "f_K(p) with the congruence route. CSV: violation rows "
            "p,frob_deg,tau_order,c_size");
        cmd->add_option("--p-limit", *pl_pc, "check unramified primes up to this");
        add_common(cmd, c_pc, true);
        cmd->callback([=] { run_profile_check(*c_pc, *pl_pc); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const frobavg::ProfileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
