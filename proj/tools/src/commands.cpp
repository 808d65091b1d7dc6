#include "hypmono_cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "hypmono/fields.hpp"
#include "hypmono/gluing.hpp"
#include "hypmono/radial.hpp"
#include "hypmono/spectral.hpp"

namespace hypmono::cli {

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string flag(bool b) { return b ? "true" : "false"; }

class Csv {
public:
    Csv(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        row(header);
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

// Ordered "key = value" results followed by the canonical config.
class Manifest {
public:
    void add(const std::string& key, const std::string& value) { lines_.emplace_back(key, value); }
    void add(const std::string& key, double value) { add(key, num(value)); }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }
    void add_flag(const std::string& key, bool value) { add(key, flag(value)); }

    void write(const std::filesystem::path& path, const std::string& command, std::uint64_t seed,
               const ConfigFile& cfg, const std::vector<std::string>& outputs) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << "command = " << command << "\nseed = " << seed << "\n";
        out << "outputs = ";
        for (std::size_t i = 0; i < outputs.size(); ++i) out << (i ? "," : "") << outputs[i];
        out << "\n\n[results]\n";
        for (const auto& [k, v] : lines_) out << k << " = " << v << "\n";
        out << "\n# configuration as read\n" << cfg.canonical();
    }

private:
    std::vector<std::pair<std::string, std::string>> lines_;
};

struct Context {
    const ConfigFile& cfg;
    RunConfig rc;
    std::filesystem::path out;
    Manifest manifest;
    std::vector<std::string> outputs;

    std::filesystem::path file(const std::string& name) {
        outputs.push_back(name);
        return out / name;
    }
};

const std::vector<std::string>& command_list();

// Rejects unread keys in [monopole], [run] and the command's own section.
void finish(const ConfigFile& cfg, const std::string& section) {
    std::vector<std::string> skip;
    for (const auto& n : command_list())
        if (n != section) skip.push_back(n);
    cfg.reject_unused(skip);
}

void require_single_center(Context& c, const std::string& cmd) {
    if (c.rc.k != 1) throw c.cfg.error_at("monopole", "k", cmd + " works in the charge-one sector; set k = 1");
}

int positive_int(const ConfigFile& cfg, const std::string& s, const std::string& key, int fallback) {
    const int v = cfg.get_int(s, key, fallback);
    if (v < 1) throw cfg.error_at(s, key, "must be a positive integer");
    return v;
}

double positive(const ConfigFile& cfg, const std::string& s, const std::string& key, double fallback) {
    const double v = cfg.get_double(s, key, fallback);
    if (!(v > 0.0)) throw cfg.error_at(s, key, "must be positive");
    return v;
}

int cmd_fields(Context& c) {
    const ConfigFile& cfg = c.cfg;
    const std::string S = "fields";
    const std::string source = cfg.get_string(S, "source", c.rc.k == 1 ? "exact" : "glued");
    if (source != "exact" && source != "dirac" && source != "glued")
        throw cfg.error_at(S, "source", "expected exact, dirac or glued");
    if (source == "exact" && c.rc.k != 1) throw cfg.error_at(S, "source", "the exact monopole has k = 1");
    const std::string deriv = cfg.get_string(S, "derivative", "analytic");
    if (deriv != "analytic" && deriv != "grid") throw cfg.error_at(S, "derivative", "expected analytic or grid");
    if (deriv == "grid" && source == "glued") throw cfg.error_at(S, "derivative", "glued fields use analytic jets");
    const double h = positive(cfg, S, "h", 1e-3);
    const double r_min = positive(cfg, S, "r_min", 0.5);
    const double r_max = cfg.get_double(S, "r_max", 10.0);
    if (!(r_max >= r_min)) throw cfg.error_at(S, "r_max", "must be at least r_min");
    const int nr = positive_int(cfg, S, "nr", 20);
    const int nth = positive_int(cfg, S, "ntheta", 8);
    const int nchi = positive_int(cfg, S, "nchi", 1);
    finish(cfg, S);

    const GluingSpec spec = gluing_spec(c.rc);
    const MonopoleParams mp = spec.params;
    auto make_fn = [&](GaugePatch patch) -> ConfigFn {
        if (source == "exact") return chakrabarti_fn(mp, patch);
        const CenterSet cs = spec.centers;
        return [mp, cs, patch](const Polar<Dual3>& q) { return dirac_infinity(mp, cs, 0, q, patch); };
    };
    const ConfigFn north = make_fn(GaugePatch::north), south = make_fn(GaugePatch::south);

    Csv csv(c.file("fields.csv"), {"r", "theta", "chi", "phi_norm", "F_norm", "dphi_norm", "residual_norm"});
    double max_res = 0.0;
    int count = 0;
    for (int a = 0; a < nr; ++a) {
        const double r = nr == 1 ? r_min : r_min + a * (r_max - r_min) / (nr - 1);
        for (int b = 0; b < nth; ++b) {
            const double th = (b + 0.5) * std::numbers::pi / nth;
            for (int k = 0; k < nchi; ++k) {
                const PolarPoint p{r, th, 2.0 * std::numbers::pi * k / nchi};
                FieldSample fs;
                if (source == "glued") {
                    const ChartJet cj = c0_jet(spec, 0, p);
                    fs = sample_field(cj.jet, cj.p);
                } else {
                    const ConfigFn& f = th < 0.5 * std::numbers::pi ? north : south;
                    fs = sample_field(deriv == "grid" ? grid_jet(f, p, h) : analytic_jet(f, p), p);
                }
                max_res = std::max(max_res, fs.residual_norm);
                ++count;
                csv.row({num(r), num(th), num(p.chi), num(fs.phi_norm), num(fs.F_norm), num(fs.dphi_norm),
                         num(fs.residual_norm)});
            }
        }
    }
    c.manifest.add("source", source);
    c.manifest.add("derivative", deriv);
    if (deriv == "grid") c.manifest.add("h", h);
    c.manifest.add("chart", "center 0");
    c.manifest.add("points", count);
    c.manifest.add("max_residual_norm", max_res);
    return exit_ok;
}

int cmd_glue(Context& c) {
    const ConfigFile& cfg = c.cfg;
    const std::string S = "glue";
    const int nr = positive_int(cfg, S, "nr", 40);
    const int nth = positive_int(cfg, S, "ntheta", 40);
    finish(cfg, S);
    const GluingSpec spec = gluing_spec(c.rc);

    Csv csv(c.file("glue.csv"), {"center", "r_i", "theta_i", "residual_norm", "bound_value"});
    double K = 0.0;
    bool resolved = true;
    for (int i = 0; i < spec.centers.k(); ++i) {
        const BoundScan scan = pointwise_bound_scan(spec, i, nr, nth);
        for (const auto& n : scan.nodes)
            csv.row({std::to_string(i), num(n.r), num(n.theta), num(n.residual), num(n.bound)});
        const std::string tag = "center" + std::to_string(i) + ".";
        c.manifest.add(tag + "K", scan.K);
        c.manifest.add(tag + "K_refined", scan.K_refined);
        c.manifest.add(tag + "max_residual", scan.max_residual);
        c.manifest.add_flag(tag + "resolved", scan.resolved);
        K = std::max(K, scan.K);
        resolved = resolved && scan.resolved;
    }
    c.manifest.add("bound", "|L c0| <= K (exp(-alpha r_i) + exp(-4R)) on R <= r_i <= 2R");
    c.manifest.add("alpha", spec.params.alpha());
    c.manifest.add("nr", nr);
    c.manifest.add("ntheta", nth);
    c.manifest.add("refinement_tolerance", 0.01);
    c.manifest.add("K", K);
    c.manifest.add_flag("resolved", resolved);
    return resolved ? exit_ok : exit_nonconvergence;
}

int cmd_residual_scan(Context& c) {
    const ConfigFile& cfg = c.cfg;
    const std::string S = "residual-scan";
    require_single_center(c, "residual-scan");
    const std::vector<double> Rs = cfg.get_doubles(S, "R", {1, 2, 3, 4, 5});
    for (double R : Rs)
        if (R < 1.0) throw cfg.error_at(S, "R", "every separation must satisfy R >= 1");
    NormOptions opt;
    opt.nr = positive_int(cfg, S, "nr", opt.nr);
    opt.ntheta = positive_int(cfg, S, "ntheta", opt.ntheta);
    finish(cfg, S);

    const SlopeFit fit = residual_decay_fit(c.rc.m, c.rc.beta, Rs, opt);
    Csv csv(c.file("residual_scan.csv"), {"R", "norm", "log_norm", "below_floor", "m", "beta", "nr", "ntheta"});
    for (std::size_t i = 0; i < fit.R.size(); ++i) {
        const double v = fit.norm[i];
        const bool floor = !(v > 1e-280) || !std::isfinite(v);
        csv.row({num(fit.R[i]), num(v), floor ? "nan" : num(std::log(v)), flag(floor), num(c.rc.m), num(c.rc.beta),
                 std::to_string(opt.nr), std::to_string(opt.ntheta)});
    }
    c.manifest.add("norm", "||L c0||_{2,beta} over the transition annuli");
    c.manifest.add("nr_per_unit", opt.nr);
    c.manifest.add("ntheta", opt.ntheta);
    c.manifest.add("slope", fit.slope);
    c.manifest.add("intercept", fit.intercept);
    c.manifest.add("predicted_slope", 2.0 * (c.rc.beta - std::min(c.rc.m, 1.0)));
    c.manifest.add_flag("below_floor", fit.below_floor);
    return exit_ok;
}

int cmd_spectrum(Context& c) {
    const ConfigFile& cfg = c.cfg;
    const std::string S = "spectrum";
    std::vector<RadialKind> kinds;
    for (const auto& name : cfg.get_strings(S, "kinds", {"prototype", "D0", "D1", "D3_floer"})) {
        try {
            kinds.push_back(radial_kind_from_string(name));
        } catch (const std::invalid_argument&) {
            throw cfg.error_at(S, "kinds", "unknown operator '" + name + "'");
        }
    }
    const std::vector<double> betas = cfg.get_doubles(S, "betas", {c.rc.beta});
    for (double b : betas)
        if (!(b > 0.0 && b < std::min(1.0, c.rc.m)))
            throw cfg.error_at(S, "betas", "every beta must satisfy 0 < beta < min(1, m)");
    const bool lambdas_given = cfg.has(S, "lambdas");
    const std::vector<double> lambdas = cfg.get_doubles(S, "lambdas", {});
    EstimateOptions opt;
    opt.hs = cfg.get_doubles(S, "h", opt.hs);
    opt.Ls = cfg.get_doubles(S, "L", opt.Ls);
    opt.count = positive_int(cfg, S, "count", opt.count);
    opt.stability_tol = positive(cfg, S, "stability_tol", opt.stability_tol);
    opt.outer_fraction = positive(cfg, S, "outer_fraction", opt.outer_fraction);
    const double gamma = positive(cfg, S, "gamma", 1.0);
    const double c_amp = cfg.get_double(S, "potential_amplitude", 10.0);
    finish(cfg, S);

    Csv csv(c.file("spectrum.csv"), {"kind", "beta", "lambda", "h", "L", "bottom", "n_candidates_below_onset",
                                     "onset_predicted", "tolerance"});
    bool all_converged = true;
    int cases = 0;
    for (RadialKind kind : kinds) {
        const std::vector<double> lams =
            kind == RadialKind::prototype ? std::vector<double>{0.0} : lambdas_given ? lambdas : sweep_lambdas(kind);
        const std::vector<double> bs = kind == RadialKind::prototype ? std::vector<double>{betas.front()} : betas;
        for (double beta : bs)
            for (double lam : lams) {
                RadialOperatorSpec sp;
                sp.kind = kind;
                sp.beta = beta;
                sp.lambda = lam;
                sp.gamma = gamma;
                sp.potential = [c_amp](double x) { return c_amp * std::exp(-x); };
                sp.h = opt.hs.front();
                sp.L = opt.Ls.front();
                try {
                    sp.validate();
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(cfg.source() + ": [spectrum] " + to_string(kind) + ": " + e.what());
                }
                const SpectrumEstimate est = estimate_spectrum(sp, opt);
                const std::string n = std::to_string(est.discrete_below_onset.size());
                for (const auto& row : est.resolution)
                    csv.row({to_string(kind), num(beta), num(lam), num(row.h), num(row.L),
                             num(row.values.empty() ? NAN : row.values.front()), n, num(est.onset_predicted),
                             num(est.tolerance)});
                csv.row({to_string(kind), num(beta), num(lam), "0", "inf", num(est.bottom), n,
                         num(est.onset_predicted), num(est.tolerance)});
                const std::string tag = to_string(kind) + ".beta=" + num(beta) + ".lambda=" + num(lam) + ".";
                c.manifest.add(tag + "onset_predicted", est.onset_predicted);
                c.manifest.add(tag + "bottom", est.bottom);
                c.manifest.add(tag + "onset_estimate", est.onset_estimate);
                c.manifest.add(tag + "tolerance", est.tolerance);
                c.manifest.add(tag + "h_order", est.h_order);
                c.manifest.add_flag(tag + "converged", est.converged);
                std::string ev;
                for (double v : est.discrete_below_onset) ev += (ev.empty() ? "" : ",") + num(v);
                c.manifest.add(tag + "discrete_below_onset", ev.empty() ? "none" : ev);
                all_converged = all_converged && est.converged;
                ++cases;
            }
    }
    std::string hs, Ls;
    for (double h : opt.hs) hs += (hs.empty() ? "" : ",") + num(h);
    for (double L : opt.Ls) Ls += (Ls.empty() ? "" : ",") + num(L);
    c.manifest.add("h_values", hs);
    c.manifest.add("L_values", Ls);
    c.manifest.add("eigenvalues_per_grid", opt.count);
    c.manifest.add("stability_tol", opt.stability_tol);
    c.manifest.add("outer_fraction", opt.outer_fraction);
    c.manifest.add("cases", cases);
    c.manifest.add_flag("converged", all_converged);
    return all_converged ? exit_ok : exit_nonconvergence;
}

int cmd_solve(Context& c) {
    const ConfigFile& cfg = c.cfg;
    const std::string S = "solve";
    require_single_center(c, "solve");
    const double L = positive(cfg, S, "L", 14.0);
    const double dx = positive(cfg, S, "dx", 0.01);
    if (L / dx < 16) throw cfg.error_at(S, "dx", "grid too coarse for the domain");
    SolverParams sp;
    sp.t_steps = cfg.get_int(S, "t_steps", sp.t_steps);
    if (sp.t_steps < 0) throw cfg.error_at(S, "t_steps", "must be nonnegative");
    sp.newton_tol = positive(cfg, S, "newton_tol", sp.newton_tol);
    sp.max_newton = positive_int(cfg, S, "max_newton", sp.max_newton);
    sp.min_dt = positive(cfg, S, "min_dt", sp.min_dt);
    sp.lambda_ball = cfg.get_double(S, "lambda_ball", sp.lambda_ball);
    sp.probes = positive_int(cfg, S, "probes", sp.probes);
    sp.seed = c.rc.seed;
    const double rlo = cfg.get_double(S, "compare_rmin", 0.5);
    const double rhi = cfg.get_double(S, "compare_rmax", 10.0);
    if (!(rlo > 0.0 && rhi > rlo && rhi < L)) throw cfg.error_at(S, "compare_rmax", "need 0 < compare_rmin < compare_rmax < L");
    const int lift_points = cfg.get_int(S, "lift_points", 200);
    if (lift_points < 0) throw cfg.error_at(S, "lift_points", "must be nonnegative");
    finish(cfg, S);

    const GluingSpec spec = gluing_spec(c.rc);
    const ReducedProblem pb(spec, L, dx);
    const SolveResult res = continuity_solve(pb, sp);

    {
        Csv trace(c.file("trace.csv"), {"t", "iteration", "newton_residual", "eta_H", "order", "accepted"});
        for (const auto& rec : res.trace)
            for (std::size_t i = 0; i < rec.residuals.size(); ++i)
                trace.row({num(rec.t), std::to_string(i + 1), num(rec.residuals[i]),
                           num(i + 1 == rec.residuals.size() ? rec.eta_H : NAN), num(rec.order), flag(rec.accepted)});
    }
    const RadialProfiles prof = profiles_of(pb, res.config);
    const RadialProfiles start = profiles_of(pb, pb.c0());
    const RadialProfiles exact = chakrabarti_profiles(spec.params, prof.r);
    {
        Csv out(c.file("profiles.csv"), {"r", "h", "w", "h_start", "w_start", "h_exact", "w_exact"});
        for (std::size_t j = 0; j < prof.r.size(); ++j)
            out.row({num(prof.r[j]), num(prof.h[j]), num(prof.w[j]), num(start.h[j]), num(start.w[j]),
                     num(exact.h[j]), num(exact.w[j])});
    }

    double final_residual = NAN;
    for (const auto& rec : res.trace)
        if (rec.accepted && !rec.residuals.empty()) final_residual = rec.residuals.back();
    const ProfileComparison cmp = compare_with_chakrabarti(pb, res.config, rlo, rhi);
    const ChargeMass cm = charge_and_mass(pb, res.config);

    Manifest& m = c.manifest;
    m.add("grid.L", L);
    m.add("grid.dx", dx);
    m.add("grid.N", pb.N());
    m.add("solver.t_steps", sp.t_steps);
    m.add("solver.newton_tol", sp.newton_tol);
    m.add("solver.max_newton", sp.max_newton);
    m.add("solver.min_dt", sp.min_dt);
    m.add("solver.probes", sp.probes);
    m.add("calibration.alpha1", res.cal.alpha1);
    m.add("calibration.mu_min", res.cal.mu_min);
    m.add("calibration.alpha2", res.cal.alpha2);
    m.add("G0_norm", res.G0_norm);
    m.add("lambda_ball", res.lambda_ball);
    m.add_flag("smallness_ok", res.smallness_ok);
    m.add_flag("regime_ok", res.regime_ok);
    m.add_flag("ball_ok", res.ball_ok);
    m.add("t_reached", res.t_reached);
    m.add_flag("converged", res.converged);
    m.add("final_newton_residual", final_residual);
    m.add("sup_reduced_residual", res.sup_residual);
    m.add("compare.rmin", rlo);
    m.add("compare.rmax", rhi);
    m.add("compare.phi_rel_err", cmp.phi_err);
    m.add("compare.F_rel_err", cmp.F_err);
    m.add("compare.w_rel_err", cmp.w_err);
    m.add("charge.k_est", cm.k_est);
    m.add("charge.m_est", cm.m_est);
    if (lift_points > 0) {
        m.add("lifted_residual.points", lift_points);
        m.add("lifted_residual.sup", lifted_residual_sup(pb, res.config, rlo, rhi, lift_points, c.rc.seed));
    }
    return res.converged && res.ball_ok ? exit_ok : exit_nonconvergence;
}

int cmd_diagnose(Context& c) {
    const ConfigFile& cfg = c.cfg;
    const std::string S = "diagnose";
    const std::string source = cfg.get_string(S, "source", c.rc.k == 1 ? "exact" : "glued");
    if (source != "exact" && source != "glued") throw cfg.error_at(S, "source", "expected exact or glued");
    if (source == "exact" && c.rc.k != 1) throw cfg.error_at(S, "source", "the exact monopole has k = 1");
    ChargeOptions opt;
    opt.r_max = positive(cfg, S, "r_max", opt.r_max);
    opt.dr = positive(cfg, S, "dr", opt.dr);
    opt.ntheta = positive_int(cfg, S, "ntheta", opt.ntheta);
    finish(cfg, S);

    const GluingSpec spec = gluing_spec(c.rc);
    const ChargeMass cm = source == "exact" ? charge_and_mass(chakrabarti_fn(spec.params, GaugePatch::north), opt)
                                            : charge_and_mass(spec, opt);
    const double k_int = std::round(cm.k_est);
    Csv csv(c.file("diagnose.csv"), {"source", "k", "m", "k_est", "m_est", "r_max", "dr", "ntheta"});
    csv.row({source, std::to_string(c.rc.k), num(c.rc.m), num(cm.k_est), num(cm.m_est), num(opt.r_max), num(opt.dr),
             std::to_string(opt.ntheta)});
    c.manifest.add("source", source);
    c.manifest.add("quadrature.r_max", opt.r_max);
    c.manifest.add("quadrature.dr", opt.dr);
    c.manifest.add("quadrature.ntheta", opt.ntheta);
    c.manifest.add("k_est", cm.k_est);
    c.manifest.add("m_est", cm.m_est);
    c.manifest.add("k_nearest_integer", k_int);
    c.manifest.add("k_integer_defect", std::abs(cm.k_est - k_int));
    return exit_ok;
}

using Handler = std::function<int(Context&)>;

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> h{
        {"fields", cmd_fields},     {"glue", cmd_glue},   {"residual-scan", cmd_residual_scan},
        {"spectrum", cmd_spectrum}, {"solve", cmd_solve}, {"diagnose", cmd_diagnose},
    };
    return h;
}

const std::vector<std::string>& command_list() {
    static const std::vector<std::string> names{"fields", "glue", "residual-scan", "spectrum", "solve", "diagnose"};
    return names;
}

}  // namespace

const std::vector<std::string>& command_names() { return command_list(); }

int run_command(const std::string& name, const ConfigFile& cfg, const CommandOptions& opt, std::ostream& log) {
    const auto it = handlers().find(name);
    if (it == handlers().end()) {
        log << "error: unknown subcommand '" << name << "'\n";
        return exit_config;
    }
    try {
        RunConfig rc = read_run_config(cfg);
        if (opt.seed) rc.seed = *opt.seed;
        std::filesystem::create_directories(opt.out_dir);
        Context ctx{cfg, rc, opt.out_dir, {}, {}};
        gluing_spec(rc);
        const int code = it->second(ctx);
        ctx.outputs.push_back("manifest.txt");
        ctx.manifest.add("exit_code", code);
        ctx.manifest.write(ctx.out / "manifest.txt", name, rc.seed, cfg, ctx.outputs);
        if (code == exit_nonconvergence) log << name << ": numerical non-convergence (see manifest.txt)\n";
        return code;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::invalid_argument& e) {
        log << "config error: " << e.what() << "\n";
        return exit_config;
    }
}

}  // namespace hypmono::cli
