#include "app/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "app/manifest.hpp"
#include "dsf/asymptotics.hpp"
#include "dsf/checks.hpp"
#include "dsf/closed_form.hpp"
#include "dsf/errors.hpp"
#include "dsf/format.hpp"
#include "dsf/hadamard.hpp"
#include "dsf/numerics.hpp"
#include "dsf/parallel.hpp"
#include "dsf/signature.hpp"

namespace dsf::app {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Everything a command needs besides its own flags.
struct Context {
    const RunConfig& cfg;
    fs::path out_dir;
    std::string out_text;
    std::string format;
    int threads = 0;
    Tolerances tol;
    std::ostream& out;
};

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const SpinorAmplitude& v) { return json::array({to_json(v(0)), to_json(v(1))}); }

json to_json(const Matrix2& m) {
    return json::array({json::array({to_json(m(0, 0)), to_json(m(0, 1))}),
                        json::array({to_json(m(1, 0)), to_json(m(1, 1))})});
}

/// Base settings echoed into every manifest.
json base_config(const Context& c) {
    return {{"out", c.out_text},      {"format", c.format},      {"threads", c.threads},
            {"tol-rel", c.tol.rel},   {"tol-abs", c.tol.abs}};
}

void write_file(const Context& c, RunManifest& man, const std::string& name, const std::string& content) {
    const fs::path path = c.out_dir / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw NumericalError("cannot write '" + path.string() + "'");
    f << content;
    if (!f) throw NumericalError("error while writing '" + path.string() + "'");
    man.files.push_back(name);
    c.out << "wrote " << path.string() << '\n';
}

void write_json(const Context& c, RunManifest& man, const std::string& name, const json& doc) {
    write_file(c, man, name, doc.dump(2) + "\n");
}

/// One CSV line from already formatted cells.
std::string csv_row(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    return line + '\n';
}

std::string fmt(double x) { return format_double(x); }

TaskRecord make_task(std::string id) {
    TaskRecord t;
    t.id = std::move(id);
    return t;
}

// ---------------------------------------------------------------- solve-mode

int cmd_solve_mode(const Context& c, RunManifest& man) {
    const RunConfig& cfg = c.cfg;
    const std::string slicing = cfg.text("slicing");
    const double m = cfg.number("m");
    ModeParams p;
    System system = System::Closed;
    std::string chart;
    json cfg_echo = base_config(c);
    if (slicing == "closed") {
        if (cfg.has("k") || cfg.has("s")) throw ConfigError("--k and --s apply to flat slicing only");
        const double lambda = cfg.number("lambda");
        p = ModeParams::closed(m, lambda);
        chart = cfg.text("chart", "closed");
        if (chart != "closed") throw ConfigError("--chart: closed slicing has the single chart 'closed'");
        cfg_echo["lambda"] = lambda;
    } else if (slicing == "flat") {
        if (cfg.has("lambda")) throw ConfigError("--lambda is derived from --k and --s for flat slicing");
        const auto k = cfg.tuple("k", 3);
        const int s = cfg.integer("s");
        p = ModeParams::flat(m, {k[0], k[1], k[2]}, s);
        chart = cfg.text("chart", "cosmological");
        if (chart == "cosmological") {
            system = System::FlatCosmological;
        } else if (chart == "conformal") {
            system = System::FlatConformal;
        } else if (chart == "phase-stripped") {
            system = System::FlatPhaseStripped;
        } else {
            throw ConfigError("--chart: expected cosmological, conformal or phase-stripped, got '" + chart + "'");
        }
        cfg_echo["k"] = k;
        cfg_echo["s"] = s;
    } else {
        throw ConfigError("--slicing: expected closed or flat, got '" + slicing + "'");
    }

    const double t0 = cfg.number("t0");
    const double t1 = cfg.number("t1");
    if (t0 == t1) throw ConfigError("--t0/--t1: the integration interval is empty (t0 = t1)");
    if (system == System::FlatConformal && !(t0 < 0.0 && t1 < 0.0))
        throw ConfigError("--t0/--t1: conformal time must stay negative (tau < 0)");
    if (system == System::FlatPhaseStripped && !(t0 < t1))
        throw ConfigError("--t0/--t1: the phase-stripped chart integrates forward only (t0 < t1)");

    const std::string initial = cfg.text("initial", "custom");
    SpinorAmplitude u0;
    std::vector<double> u0_echo;
    if (initial == "custom") {
        u0_echo = cfg.tuple("u0", 4, "1,0,0,0");
        u0 = spinor(Complex(u0_echo[0], u0_echo[1]), Complex(u0_echo[2], u0_echo[3]));
        if (u0.norm() == 0.0) throw ConfigError("--u0: the initial amplitude must be nonzero");
    } else if (initial == "exact-plus" || initial == "exact-minus") {
        if (slicing != "closed") throw ConfigError("--initial: exact solutions exist for closed slicing only");
        if (cfg.has("u0")) throw ConfigError("--u0 conflicts with --initial " + initial);
    } else {
        throw ConfigError("--initial: expected custom, exact-plus or exact-minus, got '" + initial + "'");
    }

    const int samples = cfg.integer("samples", 0);
    if (samples < 0 || samples == 1) throw ConfigError("--samples: expected 0 (every step) or at least 2");
    std::vector<double> stops;
    if (samples >= 2) {
        const auto all = linspace(t0, t1, samples);
        stops.assign(all.begin() + 1, all.end() - 1);
    }

    cfg_echo.update({{"slicing", slicing}, {"m", m}, {"chart", chart}, {"t0", t0}, {"t1", t1},
                     {"initial", initial}, {"samples", samples}});
    if (initial == "custom") cfg_echo["u0"] = u0_echo;
    man.config = cfg_echo;

    // Validation is complete; computation starts here.
    if (initial != "custom") {
        u0 = exact_solution(initial == "exact-plus" ? Branch::Plus : Branch::Minus, t0, p);
    }
    TaskRecord task = make_task("solve-mode");
    const auto start = Clock::now();
    const Trajectory traj = system == System::FlatPhaseStripped
                                ? integrate_phase_stripped(p, u0, t0, t1, c.tol, stops)
                                : integrate(system, p, u0, t0, t1, c.tol, stops);
    double drift = 0.0;
    for (const auto& s : traj.states) drift = std::max(drift, std::abs(s.norm() - u0.norm()));
    task.wall_clock_s = seconds_since(start);
    task.max_deviation = drift;
    task.details = {{"system", to_string(system)},
                    {"samples", traj.size()},
                    {"accepted_steps", traj.stats.accepted},
                    {"rejected_steps", traj.stats.rejected},
                    {"rhs_evaluations", traj.stats.rhs_evaluations},
                    {"min_step", traj.stats.min_step},
                    {"max_step", traj.stats.max_step}};
    man.tasks.push_back(task);

    if (c.format == "csv") {
        std::ostringstream os;
        write_trajectory_csv(os, traj);
        write_file(c, man, "trajectory.csv", os.str());
    } else {
        json rows = json::array();
        for (std::size_t i = 0; i < traj.size(); ++i) {
            rows.push_back({{"t", traj.times[i]}, {"u", to_json(traj.states[i])}});
        }
        write_json(c, man, "trajectory.json", {{"system", to_string(system)}, {"samples", rows}});
    }
    c.out << traj.size() << " samples, norm drift " << fmt(drift) << '\n';
    return kExitOk;
}

// ----------------------------------------------------------------- signature

json signature_side(const std::string& source, const Matrix2& entries) {
    const auto proj = project_negative(entries);
    return {{"source", source},
            {"entries", to_json(entries)},
            {"eigenvalues", json::array({proj.eigenvalues[0], proj.eigenvalues[1]})},
            {"negative_projector", to_json(proj.projector)},
            {"degenerate_spectrum", proj.degenerate_spectrum}};
}

int cmd_signature(const Context& c, RunManifest& man) {
    const RunConfig& cfg = c.cfg;
    const auto ms = cfg.grid("m");
    const auto ls = cfg.grid("lambda");
    const double t_extract = cfg.number("t-extract", 30.0);
    if (!(t_extract > 0.0)) throw ConfigError("--t-extract must be positive");
    std::vector<ModeParams> modes;
    for (double m : ms) {
        for (double l : ls) modes.push_back(ModeParams::closed(m, l));
    }
    json cfg_echo = base_config(c);
    cfg_echo.update({{"m", ms}, {"lambda", ls}, {"t-extract", t_extract}});
    man.config = cfg_echo;

    std::vector<json> records(modes.size());
    std::vector<TaskRecord> tasks(modes.size());
    parallel_for(modes.size(), c.threads, [&](std::size_t i) {
        const ModeParams& p = modes[i];
        std::ostringstream id;
        id << "m=" << p.m << ",lambda=" << p.lambda;
        TaskRecord& task = tasks[i];
        task.id = id.str();
        json rec = {{"m", p.m}, {"lambda", p.lambda}};
        const auto start = Clock::now();
        try {
            const Matrix2 closed = signature_closed_form(p).entries;
            rec["closed_form"] = signature_side("closed-form", closed);
            const auto num = signature_numeric(p, t_extract, c.tol);
            json numeric = signature_side("numeric", num.s_total.entries);
            numeric["s_plus"] = to_json(num.s_plus.entries);
            numeric["s_minus"] = to_json(num.s_minus.entries);
            rec["numeric"] = numeric;
            const double dev = max_entry_diff(num.s_total.entries, closed);
            rec["max_deviation"] = dev;
            rec["status"] = "ok";
            task.max_deviation = dev;
        } catch (const std::exception& e) {
            rec["status"] = "failed";
            rec["error"] = e.what();
            task.status = "failed";
            task.error = e.what();
        }
        task.wall_clock_s = seconds_since(start);
        records[i] = rec;
    });
    man.tasks = tasks;

    write_json(c, man, "signature.json", json(records));
    if (c.format == "csv") {
        std::string csv = csv_row({"m", "lambda", "source", "status", "re_s11", "im_s11", "re_s12", "im_s12", "re_s21",
                                   "im_s21", "re_s22", "im_s22", "eig_min", "eig_max", "max_deviation"});
        for (const auto& rec : records) {
            for (const char* side : {"closed_form", "numeric"}) {
                if (!rec.contains(side)) continue;
                const json& s = rec[side];
                std::vector<std::string> cells{fmt(rec["m"].get<double>()), fmt(rec["lambda"].get<double>()),
                                               s["source"].get<std::string>(), rec["status"].get<std::string>()};
                for (int r = 0; r < 2; ++r) {
                    for (int k = 0; k < 2; ++k) {
                        cells.push_back(fmt(s["entries"][r][k][0].get<double>()));
                        cells.push_back(fmt(s["entries"][r][k][1].get<double>()));
                    }
                }
                cells.push_back(fmt(s["eigenvalues"][0].get<double>()));
                cells.push_back(fmt(s["eigenvalues"][1].get<double>()));
                cells.push_back(rec.contains("max_deviation") ? fmt(rec["max_deviation"].get<double>()) : std::string());
                csv += csv_row(cells);
            }
        }
        write_file(c, man, "signature.csv", csv);
    }

    std::size_t failed = 0;
    double worst = 0.0;
    for (const auto& t : tasks) {
        if (t.status != "ok") ++failed;
        if (t.max_deviation) worst = std::max(worst, *t.max_deviation);
    }
    c.out << records.size() << " modes, max deviation " << fmt(worst) << ", " << failed << " failed\n";
    if (failed) {
        man.message = std::to_string(failed) + " mode(s) failed";
        return kExitNumericalError;
    }
    return kExitOk;
}

// ------------------------------------------------------------------ twopoint

int cmd_twopoint(const Context& c, RunManifest& man) {
    const RunConfig& cfg = c.cfg;
    const double m = cfg.number("m");
    const double radius = cfg.number("radius");
    ab_params(m, radius);  // validates m and R
    const auto zs = cfg.grid("z", "0:0.999:200");
    for (double z : zs) {
        if (!(z >= 0.0 && z <= 0.999))
            throw ConfigError("--z: Z values must lie in [0, 0.999], got " + fmt(z));
    }
    const auto gaps = cfg.grid("exponent-grid", "geom:1e-2:1e-3:16");
    std::vector<double> fit_z;
    for (double w : gaps) fit_z.push_back(1.0 - w);
    validate_exponent_grid(fit_z);
    json cfg_echo = base_config(c);
    cfg_echo.update({{"m", m}, {"radius", radius}, {"z", zs}, {"exponent-grid", gaps}});
    man.config = cfg_echo;

    TaskRecord table = make_task("scalars");
    auto start = Clock::now();
    std::vector<TwoPointScalars> rows(zs.size());
    parallel_for(zs.size(), c.threads, [&](std::size_t i) { rows[i] = two_point_scalars(zs[i], m, radius); });
    table.wall_clock_s = seconds_since(start);
    table.details = {{"rows", rows.size()}};
    man.tasks.push_back(table);
    if (c.format == "csv") {
        std::string csv = csv_row({"Z", "re_f", "im_f", "re_h", "im_h"});
        for (const auto& r : rows) csv += csv_row({fmt(r.Z), fmt(r.f.real()), fmt(r.f.imag()), fmt(r.h.real()), fmt(r.h.imag())});
        write_file(c, man, "twopoint.csv", csv);
    } else {
        json arr = json::array();
        for (const auto& r : rows) arr.push_back({{"Z", r.Z}, {"f", to_json(r.f)}, {"h", to_json(r.h)}});
        write_json(c, man, "twopoint.json", arr);
    }

    TaskRecord fit = make_task("exponents");
    start = Clock::now();
    const auto ex = singularity_exponents(m, radius, fit_z);
    fit.wall_clock_s = seconds_since(start);
    fit.details = {{"p_f", ex.p_f}, {"p_h", ex.p_h}};
    man.tasks.push_back(fit);
    write_json(c, man, "exponents.json",
               {{"m", m},
                {"radius", radius},
                {"p_f", ex.p_f},
                {"p_h", ex.p_h},
                {"rms_residual_f", ex.residual_f},
                {"rms_residual_h", ex.residual_h},
                {"max_residual_f", ex.max_residual_f},
                {"max_residual_h", ex.max_residual_h},
                {"z_grid", fit_z}});
    c.out << "p_f = " << fmt(ex.p_f) << ", p_h = " << fmt(ex.p_h) << '\n';
    return kExitOk;
}

// ------------------------------------------------------------------ boundary

int cmd_boundary(const Context& c, RunManifest& man) {
    const RunConfig& cfg = c.cfg;
    const double m = cfg.number("m");
    const double m_prime = cfg.number("m-prime");
    const double lambda = cfg.number("lambda");
    const auto taus = cfg.grid("tau", "-1e3,-1e4");
    const auto t_grid = cfg.grid("t-grid", "-5:5:21");
    const int index = cfg.integer("index", 1);
    const auto p = ModeParams::flat_lambda(m, lambda);
    const auto q = ModeParams::flat_lambda(m_prime, lambda);
    if (index != 1 && index != 2) throw ConfigError("--index: expected 1 or 2");
    for (double tau : taus) {
        if (!(tau < 0.0)) throw ConfigError("--tau: conformal times must be negative, got " + fmt(tau));
    }
    json cfg_echo = base_config(c);
    cfg_echo.update({{"m", m}, {"m-prime", m_prime}, {"lambda", lambda}, {"tau", taus}, {"t-grid", t_grid},
                     {"index", index}});
    man.config = cfg_echo;

    TaskRecord coeff = make_task("boundary_coefficients");
    auto start = Clock::now();
    const bool explicit_tol = cfg.has("tol-rel") || cfg.has("tol-abs");
    // The past coefficients need the far past, where the global default is too loose.
    const Tolerances coeff_tol = explicit_tol ? c.tol : Tolerances{1e-13, 1e-14};
    const FlatFundamentalSolution sol_m(p, index, coeff_tol), sol_mp(q, index, coeff_tol);
    const auto ua = sol_m.at_conformal(taus);
    const auto ub = sol_mp.at_conformal(taus);
    json coeff_rows = json::array();
    std::string coeff_csv = csv_row({"tau", "re_g1", "im_g1", "re_g2", "im_g2", "re_gt1", "im_gt1", "re_gt2", "im_gt2",
                                     "re_boundary_term", "im_boundary_term", "re_inner", "im_inner", "deviation"});
    double worst = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const auto g = boundary_coefficients(taus[i], ua[i], p);
        const auto gt = boundary_coefficients(taus[i], ub[i], q);
        const Complex b = boundary_term(g, gt).value;
        const Complex ip = inner(ua[i], ub[i]);
        const double dev = std::abs(b - ip);
        worst = std::max(worst, dev);
        coeff_rows.push_back({{"tau", taus[i]},
                              {"g", to_json(g)},
                              {"g_tilde", to_json(gt)},
                              {"boundary_term", to_json(b)},
                              {"inner_product", to_json(ip)},
                              {"deviation", dev}});
        coeff_csv += csv_row({fmt(taus[i]), fmt(g(0).real()), fmt(g(0).imag()), fmt(g(1).real()), fmt(g(1).imag()),
                              fmt(gt(0).real()), fmt(gt(0).imag()), fmt(gt(1).real()), fmt(gt(1).imag()),
                              fmt(b.real()), fmt(b.imag()), fmt(ip.real()), fmt(ip.imag()), fmt(dev)});
    }
    coeff.wall_clock_s = seconds_since(start);
    coeff.max_deviation = worst;
    man.tasks.push_back(coeff);

    TaskRecord mass = make_task("mass_identity");
    start = Clock::now();
    MassIdentityOptions mo;
    if (explicit_tol) mo.integration = c.tol;
    const auto report = verify_mass_identity(p, m_prime, t_grid, mo);
    mass.wall_clock_s = seconds_since(start);
    mass.max_deviation = report.max_residual;
    man.tasks.push_back(mass);
    json mass_rows = json::array();
    std::string mass_csv = csv_row({"t", "re_lhs", "im_lhs", "re_rhs", "im_rhs", "residual"});
    for (std::size_t i = 0; i < report.times.size(); ++i) {
        mass_rows.push_back({{"t", report.times[i]},
                             {"lhs", to_json(report.lhs[i])},
                             {"rhs", to_json(report.rhs[i])},
                             {"residual", report.residuals[i]}});
        mass_csv += csv_row({fmt(report.times[i]), fmt(report.lhs[i].real()), fmt(report.lhs[i].imag()),
                             fmt(report.rhs[i].real()), fmt(report.rhs[i].imag()), fmt(report.residuals[i])});
    }

    if (c.format == "csv") {
        write_file(c, man, "boundary.csv", coeff_csv);
        write_file(c, man, "mass_identity.csv", mass_csv);
    } else {
        write_json(c, man, "boundary.json",
                   {{"coefficients", coeff_rows},
                    {"mass_identity", {{"max_residual", report.max_residual}, {"rows", mass_rows}}}});
    }
    c.out << "max |B - <u, u'>| = " << fmt(worst) << ", mass identity residual " << fmt(report.max_residual) << '\n';
    return kExitOk;
}

// --------------------------------------------------------------------- smear

int cmd_smear(const Context& c, RunManifest& man) {
    const RunConfig& cfg = c.cfg;
    const double lambda = cfg.number("lambda", 1.0);
    const auto interval = cfg.tuple("interval", 2, "1,2");
    const auto ts = cfg.grid("t", "10,20,40,80");
    const int n = cfg.integer("quadrature-n", 64);
    const int index = cfg.integer("index", 1);
    if (!(interval[0] > 0.0 && interval[0] < interval[1]))
        throw ConfigError("--interval: expected 0 < m_L < m_R");
    if (n < 2) throw ConfigError("--quadrature-n must be at least 2");
    if (index != 1 && index != 2) throw ConfigError("--index: expected 1 or 2");
    if (lambda == 0.0) throw ConfigError("--lambda must be nonzero");
    for (double t : ts) {
        if (!(t > 0.0)) throw ConfigError("--t: times must be positive for the decay fit, got " + fmt(t));
    }
    json cfg_echo = base_config(c);
    cfg_echo.update({{"lambda", lambda}, {"interval", interval}, {"t", ts}, {"quadrature-n", n}, {"index", index}});
    man.config = cfg_echo;

    const MassInterval iv{interval[0], interval[1]};
    SmearOptions so;
    so.quadrature_n = n;
    so.fundamental_index = index;
    if (cfg.has("tol-rel") || cfg.has("tol-abs")) so.integration = c.tol;
    TaskRecord task = make_task("smear");
    const auto start = Clock::now();
    const auto res = mass_smear(lambda, iv, smooth_bump(iv), ts, so);
    std::vector<double> norms;
    double gap = 0.0;
    for (const auto& r : res) {
        norms.push_back(r.value.norm());
        gap = std::max(gap, r.refinement_gap);
    }
    std::optional<PowerLawFit> fit;
    if (ts.size() >= 2) fit = fit_power_law(ts, norms);
    task.wall_clock_s = seconds_since(start);
    task.details = {{"quadrature_refinement_gap", gap}};
    if (fit) {
        task.details["decay_exponent"] = fit->exponent;
        task.details["fit_rms_residual"] = fit->rms_residual;
    }
    man.tasks.push_back(task);

    json fit_json = nullptr;
    if (fit) {
        fit_json = {{"exponent", fit->exponent},
                    {"intercept", fit->intercept},
                    {"rms_residual", fit->rms_residual},
                    {"max_residual", fit->max_residual}};
    }
    if (c.format == "csv") {
        std::string csv =
            csv_row({"t", "re_u1", "im_u1", "re_u2", "im_u2", "norm", "norm_times_t", "refinement_gap"});
        for (std::size_t i = 0; i < res.size(); ++i) {
            const auto& v = res[i].value;
            csv += csv_row({fmt(res[i].t), fmt(v(0).real()), fmt(v(0).imag()), fmt(v(1).real()), fmt(v(1).imag()),
                            fmt(norms[i]), fmt(norms[i] * res[i].t), fmt(res[i].refinement_gap)});
        }
        write_file(c, man, "smear.csv", csv);
        if (fit) write_json(c, man, "smear_fit.json", fit_json);
    } else {
        json rows = json::array();
        for (std::size_t i = 0; i < res.size(); ++i) {
            rows.push_back({{"t", res[i].t},
                            {"value", to_json(res[i].value)},
                            {"norm", norms[i]},
                            {"refinement_gap", res[i].refinement_gap}});
        }
        write_json(c, man, "smear.json", {{"rows", rows}, {"fit", fit_json}});
    }
    if (fit) c.out << "decay exponent " << fmt(fit->exponent) << " (rms " << fmt(fit->rms_residual) << ")\n";
    return kExitOk;
}

// -------------------------------------------------------------------- verify

int cmd_verify(const Context& c, RunManifest& man) {
    const std::string suite = c.cfg.text("suite", "all");
    const auto suites = checks::parse_suites(suite);
    json cfg_echo = base_config(c);
    cfg_echo["suite"] = suite;
    man.config = cfg_echo;

    checks::VerifyOptions vo;
    vo.threads = c.threads;
    vo.integration = c.tol;
    man.checks = checks::run_suites(suites, vo);
    std::size_t failed = 0;
    for (const auto& ck : man.checks) {
        TaskRecord t = make_task(ck.name);
        t.status = ck.passed ? "ok" : "failed";
        t.wall_clock_s = ck.wall_clock_s;
        t.error = ck.error;
        man.tasks.push_back(t);
        if (!ck.passed) ++failed;
        c.out << (ck.passed ? "PASS " : "FAIL ") << ck.name << "  measured=" << fmt(ck.measured);
        if (!ck.error.empty()) c.out << "  error: " << ck.error;
        c.out << '\n';
    }
    c.out << (man.checks.size() - failed) << "/" << man.checks.size() << " checks passed\n";
    if (failed) {
        man.message = std::to_string(failed) + " check(s) failed";
        return kExitVerificationFailed;
    }
    return kExitOk;
}

using CommandFn = int (*)(const Context&, RunManifest&);

CommandFn find_command(const std::string& name) {
    if (name == "solve-mode") return cmd_solve_mode;
    if (name == "signature") return cmd_signature;
    if (name == "twopoint") return cmd_twopoint;
    if (name == "boundary") return cmd_boundary;
    if (name == "smear") return cmd_smear;
    if (name == "verify") return cmd_verify;
    return nullptr;
}

std::string status_for(int code) {
    switch (code) {
        case kExitOk: return "ok";
        case kExitVerificationFailed: return "verification_failed";
        case kExitConfigError: return "config_error";
        default: return "numerical_error";
    }
}

}  // namespace

const std::vector<FlagSpec>& global_flags() {
    static const std::vector<FlagSpec> flags = {
        {"out", "output directory (default dsf-out)"},
        {"format", "table format: csv or json (default csv)"},
        {"threads", "worker threads, 0 = one per logical core (default 0)"},
        {"tol-rel", "relative integration tolerance (default 1e-10)"},
        {"tol-abs", "absolute integration tolerance (default 1e-12)"},
    };
    return flags;
}

const std::vector<CommandSpec>& command_specs() {
    static const std::vector<CommandSpec> specs = {
        {"solve-mode",
         "integrate one Dirac mode and write its trajectory",
         {{"slicing", "closed or flat"},
          {"m", "mass m > 0"},
          {"lambda", "closed slicing: half-odd eigenvalue with |lambda| >= 3/2"},
          {"k", "flat slicing: momentum k1,k2,k3"},
          {"s", "flat slicing: helicity +1 or -1"},
          {"chart", "closed | cosmological | conformal | phase-stripped"},
          {"t0", "start time (conformal chart: tau < 0)"},
          {"t1", "end time"},
          {"u0", "initial amplitude re1,im1,re2,im2 (default 1,0,0,0)"},
          {"initial", "custom | exact-plus | exact-minus (closed slicing)"},
          {"samples", "0 records every accepted step; N >= 2 records N evenly spaced times"}}},
        {"signature",
         "closed-form and numeric signature matrices over a mode grid",
         {{"m", "mass list or grid"},
          {"lambda", "eigenvalue list or grid"},
          {"t-extract", "extraction time |T| (default 30)"}}},
        {"twopoint",
         "two-point scalars f, h on a Z grid and their short-distance exponents",
         {{"m", "mass m > 0"},
          {"radius", "curvature radius R > 0"},
          {"z", "Z grid in [0, 0.999] (default 0:0.999:200)"},
          {"exponent-grid", "values of 1 - Z for the exponent fit (default geom:1e-2:1e-3:16)"}}},
        {"boundary",
         "past boundary coefficients and the mode-level mass identity (flat slicing)",
         {{"m", "mass m > 0"},
          {"m-prime", "second mass m' > 0"},
          {"lambda", "coupling lambda = s|k| (nonzero)"},
          {"tau", "conformal extraction times (default -1e3,-1e4)"},
          {"t-grid", "cosmological times for the mass identity (default -5:5:21)"},
          {"index", "fundamental solution 1 or 2 (default 1)"}}},
        {"smear",
         "mass-smeared mode norms and their decay fit",
         {{"lambda", "coupling (default 1)"},
          {"interval", "mass interval m_L,m_R (default 1,2)"},
          {"t", "cosmological times (default 10,20,40,80)"},
          {"quadrature-n", "Gauss-Legendre nodes, checked against twice as many (default 64)"},
          {"index", "fundamental solution 1 or 2 (default 1)"}}},
        {"verify",
         "run verification suites and write a manifest of checks",
         {{"suite", "ode | special | signature | boundary | hadamard | all (default all)"}}},
    };
    return specs;
}

int run_command(const Invocation& inv, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    RunManifest man;
    man.command = inv.command;
    man.config_file = inv.config_file;
    man.config_input = inv.config.merged();
    man.config = man.config_input;
    std::optional<fs::path> out_dir;
    int code = kExitOk;
    try {
        const CommandFn fn = find_command(inv.command);
        if (!fn) throw ConfigError("unknown command '" + inv.command + "'");
        std::set<std::string> known;
        for (const auto& f : global_flags()) known.insert(f.name);
        for (const auto& spec : command_specs()) {
            if (spec.name != inv.command) continue;
            for (const auto& f : spec.flags) known.insert(f.name);
        }
        const std::string out_text = inv.config.text("out", "dsf-out");
        if (out_text.empty()) throw ConfigError("--out must not be empty");
        out_dir = fs::path(out_text);
        inv.config.reject_unknown(known);

        const std::string format = inv.config.text("format", "csv");
        if (format != "csv" && format != "json") throw ConfigError("--format: expected csv or json");
        const int threads = inv.config.integer("threads", 0);
        if (threads < 0) throw ConfigError("--threads must be non-negative");
        const Tolerances tol = integration_tolerances(inv.config);

        std::error_code ec;
        fs::create_directories(*out_dir, ec);
        if (ec) throw ConfigError("--out: cannot create '" + out_text + "': " + ec.message());
        const Context ctx{inv.config, *out_dir, out_text, format, threads, tol, out};
        code = fn(ctx, man);
    } catch (const PreconditionError& e) {
        code = kExitConfigError;
        man.message = e.what();
        err << "error: " << e.what() << '\n';
    } catch (const NumericalError& e) {
        code = kExitNumericalError;
        man.message = e.what();
        err << "numerical failure: " << e.what() << '\n';
    } catch (const std::exception& e) {
        code = kExitNumericalError;
        man.message = e.what();
        err << "failure: " << e.what() << '\n';
    }
    for (auto& t : man.tasks) {
        if (t.status != "ok" && code == kExitOk) code = kExitNumericalError;
    }
    man.exit_code = code;
    man.status = status_for(code);
    man.wall_clock_s = seconds_since(start);
    if (out_dir) {
        try {
            std::error_code ec;
            fs::create_directories(*out_dir, ec);
            const auto path = write_manifest(*out_dir, man);
            out << "wrote " << path.string() << '\n';
        } catch (const std::exception& e) {
            err << "warning: manifest not written: " << e.what() << '\n';
        }
    }
    return code;
}

}  // namespace dsf::app
