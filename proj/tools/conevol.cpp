// conevol: cone-volume and convex-form calculators on the command line.
//
// Subcommands: verify, bounds, volume, sweep, membership.
// All randomized outputs are deterministic functions of (command, seed) and
// independent of CONEVOL_THREADS.

#include <CLI11.hpp>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "conevol/bounds.hpp"
#include "conevol/gauge.hpp"
#include "conevol/io.hpp"
#include "conevol/membership.hpp"
#include "conevol/sphere.hpp"
#include "conevol/volume.hpp"

using namespace conevol;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitCheckFailure = 2;
constexpr int kExitGuardRail = 3;
constexpr int kExitParseFailure = 4;

struct Manifest {
    std::string command;
    json parameters = json::object();
    uint64_t seed = 0;
    std::vector<std::string> artifact_paths;

    // wall time goes to stderr only, so re-runs stay byte-identical
    json to_json() const {
        return {
            {"command", command},
            {"parameters", parameters},
            {"seed", seed},
            {"artifact_paths", artifact_paths},
            {"version", kVersion},
        };
    }
};

void emit(const json& doc, const std::string& out_path) {
    std::string text = doc.dump(2);
    text.push_back('\n');
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        f << text;
    }
}

bool guard_ok(int n, int degree, bool unsafe) {
    return unsafe || (n <= 8 && degree <= 10);
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Form random_zero_mean_form(int n, int degree, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Form p(n, degree);
    for (const auto& alpha : monomial_exponents(n, degree)) p.add_term(alpha, gauss(rng));
    p.prune();
    p -= sphere_integral(p) * radial_power(n, degree / 2);
    return p;
}

BiForm random_biform(int n, int xdeg, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    BiForm b(n, xdeg);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            Form e(n, xdeg);
            for (const auto& alpha : monomial_exponents(n, xdeg)) e.add_term(alpha, gauss(rng));
            e.prune();
            b.set_entry(i, j, e);
        }
    }
    return b;
}

std::vector<double> random_unit(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(n);
    double s;
    do {
        s = 0.0;
        for (int i = 0; i < n; ++i) {
            x[i] = gauss(rng);
            s += x[i] * x[i];
        }
    } while (s < 1e-12);
    for (auto& v : x) v /= std::sqrt(s);
    return x;
}

// ---------------------------------------------------------------- verify ---

struct CheckResult {
    std::string name;
    bool pass = true;
    double worst_residual = 0.0;

    void fold(double residual, double tolerance) {
        worst_residual = std::max(worst_residual, residual);
        if (residual > tolerance) pass = false;
    }
};

int cmd_verify(int n, int degree, int trials, uint64_t seed, const std::string& out_path,
               bool unsafe) {
    if (!guard_ok(n, degree, unsafe)) return kExitGuardRail;
    const int d = degree / 2;
    std::mt19937_64 rng(seed);
    std::vector<CheckResult> checks;

    { // closed form of B_{r^{2d}} against the Hessian map
        CheckResult c{"b_r2d_closed_form"};
        BiForm lhs = b_r2d(n, d);
        BiForm rhs = hessian_biform(radial_power(n, d));
        c.fold(lhs.coeff_distance(rhs) / std::max(1.0, rhs.max_abs_coeff()), 1e-12);
        checks.push_back(c);
    }
    { // trace of the Hessian bi-form is the Laplacian, coefficient-exact
        CheckResult c{"trace_hessian_equals_laplacian"};
        for (int t = 0; t < std::max(trials, 1); ++t) {
            Form p = random_zero_mean_form(n, degree, rng);
            c.fold(hessian_biform(p).trace_form().coeff_distance(p.laplacian()) /
                       std::max(1.0, p.max_abs_coeff()),
                   1e-12);
        }
        checks.push_back(c);
    }
    { // product-sphere inner product equals the trace closed form
        CheckResult c{"biform_norm_two_path"};
        for (int t = 0; t < trials; ++t) {
            BiForm b = random_biform(n, degree - 2, rng);
            double a = product_sphere_inner(b, b);
            c.fold(std::abs(a - quads_norm(b)) / std::max(1e-30, std::abs(a)), 1e-9);
        }
        checks.push_back(c);
    }
    { // Stokes identity on harmonic components
        CheckResult c{"stokes_harmonic"};
        for (int t = 0; t < trials; ++t) {
            Form p = random_zero_mean_form(n, degree, rng);
            for (const auto& [m, f] : harmonic_decompose(p).components) {
                int j = f.degree();
                if (j == 0) continue;
                double lhs = dirichlet_integral(f);
                double rhs = j * (2.0 * j + n - 2.0) * l2_inner(f, f);
                c.fold(std::abs(lhs - rhs) / std::max(1e-30, std::abs(rhs)), 1e-8);
            }
        }
        checks.push_back(c);
    }
    { // Delta((x.x)^m f) = 2m(n + 2 deg - 2m - 2) (x.x)^{m-1} f on the sphere
        CheckResult c{"laplacian_eigen_identity"};
        for (int t = 0; t < trials; ++t) {
            Form p = random_zero_mean_form(n, degree, rng);
            for (const auto& [m, f] : harmonic_decompose(p).components) {
                if (m == 0) continue;
                Form g = radial_power(n, m) * f;
                Form lap = g.laplacian();
                double factor = 2.0 * m * (n + 2.0 * degree - 2.0 * m - 2.0);
                auto x = random_unit(n, rng);
                double gx = g.eval(x);
                if (std::abs(gx) < 1e-9 * std::max(1.0, g.max_abs_coeff())) continue;
                c.fold(std::abs(lap.eval(x) - factor * gx) / std::max(1e-30, std::abs(factor * gx)),
                       1e-9);
            }
        }
        checks.push_back(c);
    }
    { // Euler identity
        CheckResult c{"euler_identity"};
        for (int t = 0; t < trials; ++t) {
            Form p = random_zero_mean_form(n, degree, rng);
            auto x = random_unit(n, rng);
            auto g = p.gradient_at(std::span<const double>(x));
            double lhs = 0.0;
            for (int i = 0; i < n; ++i) lhs += x[i] * g[i];
            double rhs = degree * p.eval(x);
            c.fold(std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)), 1e-10);
        }
        checks.push_back(c);
    }
    { // linearity of p -> B_p
        CheckResult c{"hessian_linearity"};
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int t = 0; t < trials; ++t) {
            Form p = random_zero_mean_form(n, degree, rng);
            Form q = random_zero_mean_form(n, degree, rng);
            double a = gauss(rng), b = gauss(rng);
            BiForm lhs = hessian_biform(a * p + b * q);
            BiForm rhs = a * hessian_biform(p) + b * hessian_biform(q);
            c.fold(lhs.coeff_distance(rhs) / std::max(1.0, rhs.max_abs_coeff()), 1e-10);
        }
        checks.push_back(c);
    }
    { // Dirichlet energy growth bound
        CheckResult c{"dirichlet_energy_bound"};
        for (int t = 0; t < trials; ++t) {
            Form g = random_zero_mean_form(n, degree, rng);
            double bound = (2.0 * degree * degree + static_cast<double>(degree) * n) * l2_inner(g, g);
            c.fold(std::max(0.0, dirichlet_integral(g) - bound) / std::max(1e-30, bound), 1e-10);
        }
        checks.push_back(c);
    }
    { // Hessian norm vs L2 norm comparison
        CheckResult c{"metric_comparison_bound"};
        double ratio = metric_ratio(n, d);
        for (int t = 0; t < trials; ++t) {
            Form g = random_zero_mean_form(n, degree, rng);
            double bound = ratio * l2_inner(g, g);
            c.fold(std::max(0.0, hessian_inner(g, g) - bound) / std::max(1e-30, bound), 1e-10);
        }
        checks.push_back(c);
    }

    Manifest manifest;
    manifest.command = "verify";
    manifest.parameters = {{"n", n}, {"degree", degree}, {"trials", trials}};
    manifest.seed = seed;
    if (!out_path.empty()) manifest.artifact_paths.push_back(out_path);

    bool all_pass = true;
    json check_list = json::array();
    for (const auto& c : checks) {
        all_pass = all_pass && c.pass;
        check_list.push_back(
            {{"check", c.name}, {"pass", c.pass}, {"worst_residual", c.worst_residual}});
    }
    emit({{"manifest", manifest.to_json()}, {"checks", check_list}, {"all_pass", all_pass}},
         out_path);
    return all_pass ? 0 : kExitCheckFailure;
}

// ---------------------------------------------------------------- volume ---

GaugeKind parse_cone(const std::string& cone) {
    if (cone == "pos") return GaugeKind::PosTilde;
    if (cone == "convex") return GaugeKind::XSection;
    if (cone == "ktilde") return GaugeKind::KTilde;
    if (cone == "sos") return GaugeKind::SqTilde;
    if (cone == "ball") return GaugeKind::Ball;
    throw CLI::ValidationError("--cone must be pos|convex|ktilde|sos|ball");
}

json volume_cell(const std::string& cone, int n, int d, MetricTag metric, long samples,
                 uint64_t seed, VolumeEstimate* est_out) {
    GaugeOracle oracle;
    oracle.kind = parse_cone(cone);
    oracle.n = n;
    oracle.d = d;
    oracle.metric = metric;
    SubspaceBasis basis = orthonormal_basis(n, d, metric);
    VolumeEstimate est = volume_ratio(oracle, basis, samples, seed);
    if (est_out) *est_out = est;
    json cell = volume_to_json(est);
    if (cone == "convex" || cone == "ktilde") {
        cell["theorem_bound"] = theorem2_bound(n, d);
        cell["reference_exponent"] = -0.5;
    } else if (cone == "pos") {
        cell["reference_exponent"] = -0.5;
    } else if (cone == "sos") {
        cell["reference_exponent"] = -(static_cast<double>(d) - 0.5);
    }
    return cell;
}

int cmd_volume(const std::string& cone, int n, int degree, const std::string& metric_name,
               long samples, uint64_t seed, const std::string& out_path, bool unsafe) {
    if (!guard_ok(n, degree, unsafe)) return kExitGuardRail;
    MetricTag metric = (metric_name == "hessian") ? MetricTag::Hessian : MetricTag::L2;
    VolumeEstimate est;
    json cell = volume_cell(cone, n, degree / 2, metric, samples, seed, &est);

    Manifest manifest;
    manifest.command = "volume";
    manifest.parameters = {{"cone", cone},
                           {"n", n},
                           {"degree", degree},
                           {"metric", metric_name},
                           {"samples", samples}};
    manifest.seed = seed;
    if (!out_path.empty()) manifest.artifact_paths.push_back(out_path);

    json doc = {{"manifest", manifest.to_json()}};
    for (auto& [k, v] : cell.items()) doc[k] = v;
    emit(doc, out_path);
    if (est.flagged_fraction > 0.10) {
        std::cerr << "volume: flagged direction fraction " << est.flagged_fraction << " > 10%\n";
        return kExitCheckFailure;
    }
    return 0;
}

// ----------------------------------------------------------------- sweep ---

int cmd_sweep(const std::vector<std::string>& cones, int n_min, int n_max, int degree,
              long samples, long sos_samples, uint64_t seed, const std::string& out_path,
              bool unsafe) {
    for (int n = n_min; n <= n_max; ++n)
        if (!guard_ok(n, degree, unsafe)) return kExitGuardRail;
    const int d = degree / 2;

    std::ostringstream csv;
    csv << "n,cone,power_mean_root,inverse_mean,harmonic_mean,ci_low,ci_high,"
           "theorem_bound,reference_exponent,error\r\n";

    std::map<std::pair<int, std::string>, double> pmr; // for the Sq/Pos ratio
    for (int n = n_min; n <= n_max; ++n) {
        for (const auto& cone : cones) {
            csv << n << "," << cone << ",";
            try {
                MetricTag metric = (cone == "convex" || cone == "ktilde") ? MetricTag::Hessian
                                                                          : MetricTag::L2;
                long cell_samples = (cone == "sos") ? std::min(samples, sos_samples) : samples;
                VolumeEstimate est;
                volume_cell(cone, n, d, metric, cell_samples, seed, &est);
                pmr[{n, cone}] = est.power_mean_root;
                csv << fmt_double(est.power_mean_root) << "," << fmt_double(est.inverse_mean)
                    << "," << fmt_double(est.harmonic_mean) << "," << fmt_double(est.ci_low) << ","
                    << fmt_double(est.ci_high) << ",";
                if (cone == "convex" || cone == "ktilde") csv << fmt_double(theorem2_bound(n, d));
                csv << ",";
                csv << fmt_double(cone == "sos" ? -(static_cast<double>(d) - 0.5) : -0.5);
                csv << ",\r\n";
            } catch (const std::exception& e) {
                std::string msg = e.what();
                for (auto& ch : msg)
                    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
                csv << ",,,,,,," << msg << "\r\n";
            }
        }
    }

    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream f(out_path, std::ios::binary);
        f << csv.str();
        Manifest manifest;
        manifest.command = "sweep";
        json cone_list = json::array();
        for (const auto& c : cones) cone_list.push_back(c);
        manifest.parameters = {{"cones", cone_list}, {"n_min", n_min},       {"n_max", n_max},
                               {"degree", degree},   {"samples", samples},   {"sos_samples", sos_samples}};
        manifest.seed = seed;
        manifest.artifact_paths = {out_path, out_path + ".manifest.json"};
        emit(manifest.to_json(), out_path + ".manifest.json");
    }

    // qualitative Sq-vs-Pos comparison, annotated on stderr only
    bool have_pos = std::find(cones.begin(), cones.end(), "pos") != cones.end();
    bool have_sos = std::find(cones.begin(), cones.end(), "sos") != cones.end();
    if (have_pos && have_sos) {
        for (int n = n_min; n <= n_max; ++n) {
            auto ip = pmr.find({n, "pos"});
            auto is = pmr.find({n, "sos"});
            if (ip != pmr.end() && is != pmr.end() && ip->second > 0.0)
                std::cerr << "sweep: n=" << n << " v(Sq~)/v(Pos~) = " << is->second / ip->second
                          << " (reference exponent " << -(static_cast<double>(d) - 0.5) - (-0.5)
                          << ")\n";
        }
    }
    return 0;
}

// ------------------------------------------------------------ membership ---

int cmd_membership(const std::string& form_file, const std::vector<std::string>& tests,
                   double tol, const std::string& out_path) {
    Form p;
    try {
        std::ifstream f(form_file);
        if (!f) throw std::runtime_error("cannot open " + form_file);
        json doc = json::parse(f);
        p = form_from_json(doc);
    } catch (const std::exception& e) {
        std::cerr << "membership: parse failure: " << e.what() << "\n";
        return kExitParseFailure;
    }

    json results = json::object();
    for (const auto& t : tests) {
        if (t == "nonneg") {
            MembershipResult r = is_nonneg(p, tol);
            results["nonneg"] = {{"member", r.member}, {"margin", r.margin},
                                 {"reliable", r.reliable}};
        } else if (t == "convex") {
            MembershipResult r = is_convex(p, tol);
            results["convex"] = {{"member", r.member}, {"margin", r.margin},
                                 {"reliable", r.reliable}};
        } else if (t == "sos") {
            GramCertificate cert = sos_project(p);
            results["sos"] = {{"member", cert.status == SosStatus::Feasible},
                              {"certificate", certificate_to_json(cert)}};
        } else {
            std::cerr << "membership: unknown test " << t << "\n";
            return kExitParseFailure;
        }
    }

    Manifest manifest;
    manifest.command = "membership";
    json test_list = json::array();
    for (const auto& t : tests) test_list.push_back(t);
    manifest.parameters = {{"form_file", form_file}, {"tests", test_list}, {"tol", tol}};
    if (!out_path.empty()) manifest.artifact_paths.push_back(out_path);

    emit({{"manifest", manifest.to_json()},
          {"form", form_to_json(p)},
          {"results", results}},
         out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cone-volume and convex-form calculators"};
    app.require_subcommand(1);

    int n = 3, degree = 4, trials = 100;
    long samples = 1000, sos_samples = 2000;
    uint64_t seed = 42;
    double tol = 1e-6;
    std::string out_path, metric = "l2", cone = "pos", form_file;
    std::vector<std::string> cones = {"pos", "convex"};
    std::vector<std::string> tests = {"nonneg"};
    int n_min = 3, n_max = 5;
    bool unsafe = false;

    auto* verify = app.add_subcommand("verify", "run the analytic identity suite");
    verify->add_option("--n", n);
    verify->add_option("--degree", degree, "total degree 2d");
    verify->add_option("--trials", trials);
    verify->add_option("--seed", seed);
    verify->add_option("--out", out_path);
    verify->add_flag("--unsafe-scale", unsafe);

    auto* bounds = app.add_subcommand("bounds", "emit the bound report for (n, 2d)");
    bounds->add_option("--n", n);
    bounds->add_option("--degree", degree);
    bounds->add_option("--out", out_path);

    auto* volume = app.add_subcommand("volume", "Monte-Carlo volume estimate for one cone");
    volume->add_option("--cone", cone, "pos|convex|ktilde|sos|ball");
    volume->add_option("--n", n);
    volume->add_option("--degree", degree);
    volume->add_option("--metric", metric, "l2|hessian");
    volume->add_option("--samples", samples);
    volume->add_option("--seed", seed);
    volume->add_option("--out", out_path);
    volume->add_flag("--unsafe-scale", unsafe);

    auto* sweep = app.add_subcommand("sweep", "volume sweep over n, CSV output");
    sweep->add_option("--cones", cones)->delimiter(',');
    sweep->add_option("--n-min", n_min);
    sweep->add_option("--n-max", n_max);
    sweep->add_option("--degree", degree);
    sweep->add_option("--samples", samples);
    sweep->add_option("--sos-samples", sos_samples);
    sweep->add_option("--seed", seed);
    sweep->add_option("--out", out_path);
    sweep->add_flag("--unsafe-scale", unsafe);

    auto* membership = app.add_subcommand("membership", "cone membership tests for a form file");
    membership->add_option("form_file", form_file)->required();
    membership->add_option("--tests", tests)->delimiter(',');
    membership->add_option("--tol", tol);
    membership->add_option("--out", out_path);

    CLI11_PARSE(app, argc, argv);

    auto started = std::chrono::steady_clock::now();
    int rc = 0;
    try {
        if (verify->parsed()) rc = cmd_verify(n, degree, trials, seed, out_path, unsafe);
        else if (bounds->parsed()) {
            Manifest manifest;
            manifest.command = "bounds";
            manifest.parameters = {{"n", n}, {"degree", degree}};
            if (!out_path.empty()) manifest.artifact_paths.push_back(out_path);
            emit({{"manifest", manifest.to_json()},
                  {"report", bound_report_to_json(build_report(n, degree / 2))}},
                 out_path);
        } else if (volume->parsed())
            rc = cmd_volume(cone, n, degree, metric, samples, seed, out_path, unsafe);
        else if (sweep->parsed())
            rc = cmd_sweep(cones, n_min, n_max, degree, samples, sos_samples, seed, out_path,
                           unsafe);
        else if (membership->parsed())
            rc = cmd_membership(form_file, tests, tol, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailure;
    }
    std::chrono::duration<double> wall = std::chrono::steady_clock::now() - started;
    std::cerr << "wall_time_seconds " << wall.count() << "\n";
    return rc;
}
