#include "invlab/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <thread>

#include "invlab/cli/csvio.hpp"
#include "invlab/core/snapshot.hpp"
#include "invlab/simd/kernels.hpp"

namespace fs = std::filesystem;

namespace invlab {

namespace {

template <class F>
void sample3(const Grid& g, double t, Field& out, F fn) {
    for (int c = 0; c < 3; ++c)
        for (int j = 0; j <= g.n3; ++j)
            for (int i2 = 0; i2 < g.n2; ++i2)
                for (int i1 = 0; i1 < g.n1; ++i1)
                    out.at(c, j, i2, i1) = fn(c, g.x1(i1), g.x2(i2), g.y[j]);
    out.set_time(t);
}

BoundaryProfile make_profile(const RunConfig::Geometry& g) {
    if (g.profile == "flat") return BoundaryProfile::flat();
    if (g.profile == "cosine") return BoundaryProfile::cosine(g.amplitude, g.period);
    if (g.profile == "tabulated") {
        std::ifstream in(g.table_file);
        if (!in) throw std::runtime_error("cannot open profile table " + g.table_file);
        std::vector<double> tab;
        double v;
        while (in >> v) tab.push_back(v);
        return BoundaryProfile::tabulated(tab, g.table_n, g.table_extent);
    }
    throw std::runtime_error("unknown profile kind: " + g.profile);
}

} // namespace

LabSetup build_setup(const RunConfig& cfg, bool build_grid) {
    LabSetup s;
    s.profile = make_profile(cfg.geometry);
    s.geom = std::make_unique<FlatteningMap>(s.profile, cfg.geometry.delta,
                                             cfg.geometry.alpha);
    s.flow = std::make_unique<ReferenceFlow>(
        flow_kind_from_string(cfg.flow.kind), cfg.flow.amplitude, cfg.flow.decay,
        cfg.geometry.period, cfg.flow.pulse_amplitude, cfg.flow.pulse_omega,
        cfg.flow.q_amplitude);
    s.pair = std::make_unique<CorrectorPair>(*s.flow, *s.geom);

    // sup_t ||w0||_{H^3} on a uniform norm grid of the configured size
    {
        Grid ngrid(cfg.grid.n1, cfg.grid.n2, cfg.grid.n3, cfg.geometry.period,
                   GridMap{cfg.grid.height, 0.0});
        Ops ops(ngrid);
        Norms norms(ops);
        Field W(ngrid, 3);
        sample3(ngrid, 0.0, W, [&](int c, double x1, double x2, double y3) {
            return s.flow->w0(c, 0.0, x1, x2, y3);
        });
        s.w_h3_sup = s.flow->pulse_sup() * norms.hk(W, 3);
    }

    ParamTriple p;
    p.eta = cfg.viscosity.eta;
    p.nu = cfg.viscosity.nu;
    p.delta = cfg.geometry.delta;
    p.alpha = cfg.geometry.alpha;
    p.Lambda = cfg.viscosity.lambda;
    p.K0 = cfg.params.k0;
    p.delta0 = cfg.params.delta0;
    p.epsilon = cfg.params.epsilon;
    p.theta = theta_of(p.epsilon, p.eta, p.Lambda, s.w_h3_sup);
    p.beta_value = (p.nu < p.eta && p.eta < 1.0) ? beta_default(p.eta, p.nu) : 0.0;
    s.triple = p;

    s.bl = std::make_unique<BoundaryLayerField>(*s.pair, ProfilePair::instance(),
                                                p.theta, p.nu);

    if (build_grid) {
        GridMap map{cfg.grid.height, 0.0};
        const double a = s.triple.layer_width();
        if (cfg.grid.grading == "auto")
            map = GridMap::for_wall_spacing(cfg.grid.height, cfg.grid.n3,
                                            a / cfg.grid.wall_factor);
        else if (cfg.grid.grading != "uniform")
            throw std::runtime_error("grid.grading must be auto or uniform");
        s.grid = std::make_shared<Grid>(cfg.grid.n1, cfg.grid.n2, cfg.grid.n3,
                                        cfg.geometry.period, map);
        s.grading_ratio = s.grid->max_grading_ratio();
        std::ostringstream notes;
        double wall_dy = s.grid->y[1] - s.grid->y[0];
        if (wall_dy > a / 8.0 + 1e-15) {
            notes << "wall spacing " << wall_dy << " exceeds sqrt(theta nu)/8; ";
            if (cfg.grid.strict)
                throw std::runtime_error("grid does not resolve the layer width: " +
                                         notes.str());
        }
        if (s.grading_ratio > 1.05)
            notes << "grading ratio " << s.grading_ratio << " above 1.05; ";
        double supg = 0.0;
        if (s.profile.kind() == ProfileKind::Cosine) supg = 2.0 * cfg.geometry.amplitude;
        double hmin = std::max({4.0 * a,
                                4.0 * std::pow(cfg.geometry.delta, cfg.geometry.alpha) * supg,
                                1.0});
        if (cfg.grid.height < hmin) {
            notes << "height " << cfg.grid.height << " below " << hmin << "; ";
            if (cfg.grid.strict)
                throw std::runtime_error("domain height too small: " + notes.str());
        }
        if (s.profile.kind() != ProfileKind::Flat) {
            double need = cfg.geometry.delta * s.profile.period() / 16.0;
            if (s.grid->h1() > need || s.grid->h2() > need) {
                s.oscillation_resolved = false;
                notes << "boundary oscillation under-resolved (h1 "
                      << s.grid->h1() << " > " << need << "); ";
                if (cfg.grid.strict)
                    throw std::runtime_error(
                        "grid does not resolve the boundary oscillation: " + notes.str());
            }
        }
        s.grid_notes = notes.str();
    }

    s.visc = std::make_unique<ViscositySpec>(
        visc_kind_from_string(cfg.viscosity.kind), cfg.viscosity.eta, cfg.viscosity.nu,
        cfg.viscosity.lambda, cfg.viscosity.perturbation,
        cfg.viscosity.cell_factor * cfg.geometry.period / cfg.grid.n1,
        cfg.viscosity.cell_factor * cfg.geometry.period / cfg.grid.n2,
        cfg.viscosity.cell_factor * cfg.grid.height / cfg.grid.n3);
    return s;
}

namespace {

const std::vector<std::string> kLedgerHeader = {
    "n",        "t_mid",    "v_l2_0",   "v_l2_1",    "lhs_time",   "diss_mirror",
    "diss_sym", "T_advB",   "T_vw",     "T_dtB",     "T_cancel",   "T_diffcross",
    "T_vB",     "T_forcing", "T_corr",  "T_bg",      "T_qgrad",    "T_pressure",
    "rhs_sum",  "defect",   "w0_hs",    "f0_l2",     "f0_hs1",     "f0_raw",
    "f1_raw",   "f2_raw",   "ratio_42i", "ratio_42ii", "ratio_42iii", "ratio_43",
    "ratio_44", "ratio_45", "ratio_46"};

std::vector<double> ledger_row(const LedgerRow& r) {
    return {double(r.n), r.t_mid,    r.v_l2_0,   r.v_l2_1,    r.lhs_time,
            r.diss_mirror, r.diss_sym, r.T_advB, r.T_vw,      r.T_dtB,
            r.T_cancel, r.T_diffcross, r.T_vB,   r.T_forcing, r.T_corr,
            r.T_bg,     r.T_qgrad,  r.T_pressure, r.rhs_sum,  r.defect,
            r.w0_hs,    r.f0_l2,    r.f0_hs1,   r.f0_raw,    r.f1_raw,
            r.f2_raw,   r.ratio_42i, r.ratio_42ii, r.ratio_42iii, r.ratio_43,
            r.ratio_44, r.ratio_45, r.ratio_46};
}

const std::vector<std::string> kRunHeader = {
    "eta",       "nu",         "delta",      "alpha",      "beta",
    "budget",    "theta",      "sup_err",    "M",          "grad_metric",
    "grad_budget_v", "bl_l2_sup", "v_sup",   "M_env",      "env_excess",
    "max_defect", "max_divBu", "max_adv_cancel", "energy_C", "C0",
    "C1",        "C2",         "v_init",     "init_offset", "steps",
    "completed", "osc_resolved", "grading_ratio", "seed"};

} // namespace

RunResult run_one(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed,
                  std::ostream* log) {
    fs::create_directories(out_dir);
    LabSetup s = build_setup(cfg);
    const Grid& g = *s.grid;
    RunResult res;
    res.theta = s.triple.theta;
    res.osc_resolved = s.oscillation_resolved;
    res.grading_ratio = s.grading_ratio;

    auto flat_profile = s.profile.kind() == ProfileKind::Flat;
    NseSolver solver(g, flat_profile ? nullptr : s.geom.get(), *s.visc, cfg.time.dt);

    // forcing F(t) = P'(t) W + P(t)^2 V + Q
    {
        LinearForcing f;
        f.fields.reserve(3);
        f.fields.emplace_back(g, 3);
        f.fields.emplace_back(g, 3);
        f.fields.emplace_back(g, 3);
        const ReferenceFlow& flow = *s.flow;
        sample3(g, 0.0, f.fields[0], [&](int c, double x1, double x2, double y3) {
            return flow.w0(c, 0.0, x1, x2, y3);
        });
        sample3(g, 0.0, f.fields[1], [&](int c, double x1, double x2, double y3) {
            double adv = 0.0;
            for (int k = 0; k < 3; ++k) {
                double wk = flow.w0(k, 0.0, x1, x2, y3);
                if (wk != 0.0)
                    adv += wk * flow.w0_d(c, k == 0, k == 1, k == 2, 0.0, x1, x2, y3);
            }
            return adv;
        });
        sample3(g, 0.0, f.fields[2], [&](int c, double x1, double x2, double y3) {
            return flow.q_d(c + 1, 0.0, x1, x2, y3);
        });
        const ReferenceFlow* fp = s.flow.get();
        f.coeffs = [fp](double t, std::vector<double>& c) {
            c.assign(3, 0.0);
            c[0] = fp->dpulse(t);
            c[1] = fp->pulse(t) * fp->pulse(t);
            c[2] = 1.0;
        };
        solver.set_forcing(std::move(f));
    }

    // initial state: projected (w + Bl)(0) plus an optional divergence-free bump
    double f_l2_int = 0.0, u0_l2 = 0.0;
    {
        const double budget = s.triple.budget();
        if (cfg.init.perturbation > budget)
            throw std::invalid_argument("initial perturbation exceeds the data budget");
        // U = projection of W0 plus a layer-supported lift that zeroes the
        // tangential slip at the wall (charged against the data budget)
        Field U(g, 3);
        const double a = s.triple.layer_width();
        const auto& prof = ProfilePair::instance();
        sample3(g, 0.0, U, [&](int c, double x1, double x2, double y3) {
            double w0 = s.flow->W0(c, x1, x2, y3);
            double z = y3 / a;
            double lift = (z < 1.0) ? -s.flow->W0(c, x1, x2, 0.0) * prof.phi(z) : 0.0;
            return w0 + lift;
        });
        if (cfg.init.perturbation != 0.0) {
            Field bump(g, 3);
            const double H = g.H();
            const double k = 2.0 * M_PI / g.P;
            sample3(g, 0.0, bump, [&](int c, double x1, double x2, double y3) {
                double m = y3 * y3 * (1.0 - y3 / H) * (1.0 - y3 / H);
                if (c == 0) return std::sin(k * x1) * std::cos(k * x2) * m;
                if (c == 1) return -std::cos(k * x1) * std::sin(k * x2) * m;
                return 0.0;
            });
            Ops ops_tmp(g);
            Norms ntmp(ops_tmp);
            double bn = ntmp.l2(bump);
            simd::axpy(cfg.init.perturbation / bn, bump.data(), U.data(), U.size());
        }
        U.zero_walls();
        solver.set_state(U, 0.0);
        auto st = solver.projector().project(const_cast<Field&>(solver.u()));
        if (!st.converged) throw std::runtime_error("initial projection failed");

        Field W0(g, 3), diff(g, 3);
        sample3(g, 0.0, W0, [&](int c, double x1, double x2, double y3) {
            return s.flow->W0(c, x1, x2, y3);
        });
        Norms nn(solver.ops());
        for (std::size_t i = 0; i < diff.size(); ++i)
            diff.data()[i] = solver.u().data()[i] - W0.data()[i];
        res.init_offset = nn.l2(diff);
        u0_l2 = nn.l2(solver.u());
        if (res.init_offset > budget)
            throw std::invalid_argument(
                "initial data violates the beta + delta^{alpha-5/2} budget: " +
                std::to_string(res.init_offset) + " > " + std::to_string(budget));
        if (log)
            (*log) << "init: ||U - W0|| = " << res.init_offset << "  budget = " << budget
                   << "\n";
    }

    EnergyAudit audit(solver, *s.pair, *s.bl, s.triple, cfg.time.audit_cadence);
    audit.attach();
    ConvergenceTracker tracker(solver, *s.pair, *s.bl, s.triple);
    tracker.observe(solver.u(), 0.0);
    save_field(solver.u(), out_dir + "/u_000000.bin");

    const int nsteps = int(std::llround(cfg.time.t_end / cfg.time.dt));
    res.completed = true;

    for (int n = 1; n <= nsteps; ++n) {
        StepDiagnostics d;
        try {
            d = solver.step();
        } catch (const StepError& e) {
            res.completed = false;
            res.abort_reason = e.what();
            break;
        }
        if (!solver.u().finite()) {
            res.completed = false;
            res.abort_reason = "NaN detected";
            break;
        }
        res.max_divBu = std::max(res.max_divBu, d.divBu);
        res.max_adv_cancel = std::max(res.max_adv_cancel, d.adv_cancel);
        if (n % cfg.time.snapshot_cadence == 0 || n == nsteps) {
            tracker.observe(solver.u(), solver.time());
            char name[32];
            std::snprintf(name, sizeof(name), "/u_%06d.bin", n);
            save_field(solver.u(), out_dir + name);
        }
        res.steps = n;
    }

    // forcing L2 series for the energy-contract constant
    {
        Ops ops_tmp(g);
        Norms ntmp(ops_tmp);
        Field F(g, 3);
        double prev = 0.0;
        int m = 0;
        for (double t = 0.0; t <= cfg.time.t_end + 1e-12; t += cfg.time.t_end / 16.0) {
            sample3(g, t, F, [&](int c, double x1, double x2, double y3) {
                return s.flow->f0(c, t, x1, x2, y3);
            });
            double cur = ntmp.l2sq(F);
            if (m > 0) f_l2_int += 0.5 * (prev + cur) * (cfg.time.t_end / 16.0);
            prev = cur;
            ++m;
        }
    }

    // ledger and records
    {
        CsvWriter lw(out_dir + "/ledger.csv", kLedgerHeader);
        for (const auto& r : audit.rows()) {
            lw.row(ledger_row(r));
            res.max_defect = std::max(res.max_defect, std::fabs(r.defect));
        }
    }
    res.record = tracker.finish(f_l2_int, u0_l2);
    res.v_init = audit.v_initial();
    if (audit.rows().size() >= 2) {
        auto env = audit.envelope();
        res.env_M = env.M;
        res.env_excess = audit.envelope_excess(env);
        auto fc = audit.fitted_constants();
        res.C0 = fc.C0;
        res.C1 = fc.C1;
        res.C2 = fc.C2;
    }

    {
        CsvWriter rw(out_dir + "/run.csv", kRunHeader);
        const auto& r = res.record;
        rw.row({r.eta, r.nu, r.delta, cfg.geometry.alpha, r.beta, r.budget,
                s.triple.theta, r.sup_err, r.M, r.grad_metric, r.grad_budget_v,
                r.bl_l2_sup, r.v_sup, res.env_M, res.env_excess, res.max_defect,
                res.max_divBu, res.max_adv_cancel, r.energy_C, res.C0, res.C1, res.C2,
                res.v_init, res.init_offset, double(res.steps),
                res.completed ? 1.0 : 0.0, s.oscillation_resolved ? 1.0 : 0.0,
                s.grading_ratio, double(seed)});
    }

    {
        nlohmann::ordered_json man;
        man["config"] = nlohmann::ordered_json::parse(cfg.to_json_text());
        man["seed"] = seed;
        man["theta"] = s.triple.theta;
        man["beta"] = s.triple.beta_value;
        man["w_h3_sup"] = s.w_h3_sup;
        man["grid_notes"] = s.grid_notes;
        man["oscillation_resolved"] = s.oscillation_resolved;
        man["grading_ratio"] = s.grading_ratio;
        man["completed"] = res.completed;
        man["abort_reason"] = res.abort_reason;
        std::ofstream mf(out_dir + "/manifest.json");
        mf << man.dump(2) << "\n";
    }
    return res;
}

int cmd_run(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed,
            std::ostream& log) {
    try {
        RunResult r = run_one(cfg, out_dir, seed, &log);
        log << "run: steps=" << r.steps << " sup_err=" << r.record.sup_err
            << " budget=" << r.record.budget << " M=" << r.record.M
            << " max_defect=" << r.max_defect << " max_divBu=" << r.max_divBu << "\n";
        if (!r.completed) {
            log << "run aborted: " << r.abort_reason << "\n";
            return 2;
        }
        return 0;
    } catch (const StepError& e) {
        log << "solver failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        log << "validation failure: " << e.what() << "\n";
        return 1;
    }
}

// ---------------------------------------------------------------------------

namespace {

struct CheckEmitter {
    CsvWriter csv;
    std::ostream& log;
    int failures = 0;
    CheckEmitter(const std::string& path, std::ostream& l)
        : csv(path, {"check", "value", "threshold", "pass"}), log(l) {}
    // cmp: -1 value <= threshold passes, +1 value >= threshold passes
    void check(const std::string& name, double value, double threshold, int cmp) {
        bool ok = cmp < 0 ? value <= threshold : value >= threshold;
        csv.row_mixed({name, format_double(value), format_double(threshold),
                       ok ? "1" : "0"});
        log << (ok ? "  ok  " : "  FAIL") << "  " << name << " = " << value
            << (cmp < 0 ? "  (<= " : "  (>= ") << threshold << ")\n";
        if (!ok) ++failures;
    }
    void note(const std::string& name, const std::string& text) {
        csv.row_mixed({name, text, "", ""});
        log << "  note  " << name << ": " << text << "\n";
    }
};

} // namespace

int cmd_check(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed,
              std::ostream& log) {
    fs::create_directories(out_dir);
    CheckEmitter em(out_dir + "/checks.csv", log);

    LabSetup s;
    try {
        s = build_setup(cfg);
    } catch (const std::exception& e) {
        log << "FAIL setup: " << e.what() << "\n";
        return 1;
    }

    // parameter clauses
    auto verdict = is_admissible(s.triple);
    if (!verdict.ok) {
        em.note("admissible", "false: " + verdict.reason);
        ++em.failures;
    } else {
        em.note("admissible", "true");
    }
    em.check("smallness_condition",
             std::pow(s.triple.delta, s.triple.alpha - 1.0) *
                 (1.0 / (s.triple.Lambda * s.triple.Lambda) +
                  s.triple.K0 * s.profile.L() * s.profile.L() /
                      std::pow(s.triple.Lambda, 5)),
             0.25, -1);
    em.check("theta_nu", s.triple.theta * s.triple.nu, 1.0, -1);

    // layer profiles
    const auto& pp = ProfilePair::instance();
    using SK = ProfilePair::ScaledKind;
    const SK kinds[] = {SK::a, SK::b, SK::c, SK::d, SK::e, SK::f, SK::g, SK::h};
    em.check("profile_phi0_minus_1", std::fabs(pp.phi(0.0) - 1.0), 1e-12, -1);
    em.check("profile_psi1", std::fabs(pp.psi(1.0 - 1e-13)), 1e-10, -1);
    {
        double sup = 0.0;
        for (double z : {1.0, 1.5, 4.0, 100.0})
            sup = std::max({sup, std::fabs(pp.phi(z)), std::fabs(pp.psi(z))});
        em.check("profile_support_beyond_1", sup, 0.0, -1);
        for (SK kind : kinds) {
            std::vector<double> av = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}, vals;
            for (double a : av) vals.push_back(pp.scaled_norm(a, kind));
            double slope = loglog_slope(av, vals);
            em.check(std::string("profile_slope_") + ProfilePair::kind_name(kind),
                     std::fabs(slope - ProfilePair::scaled_exponent(kind)), 1e-6, -1);
            double closed = pp.scaled_norm(1e-3, kind);
            double quad = pp.scaled_norm_quadrature(1e-3, kind);
            em.check(std::string("profile_quad_") + ProfilePair::kind_name(kind),
                     std::fabs(quad - closed) / closed, 1e-8, -1);
        }
    }

    // corrector identities at three oscillation scales
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> ux(0.0, cfg.geometry.period),
            uy(0.0, 2.0), ut(0.0, cfg.time.t_end);
        for (double dd : {0.1, 0.01, 0.001}) {
            FlatteningMap gm(s.profile, dd, cfg.geometry.alpha);
            CorrectorPair cp(*s.flow, gm);
            double worst_div = 0.0, worst_wall = 0.0;
            for (int k = 0; k < 10000; ++k) {
                double t = ut(rng), x1 = ux(rng), x2 = ux(rng), y3 = uy(rng);
                worst_div = std::max(worst_div, std::fabs(cp.divBw(t, x1, x2, y3)));
                worst_wall =
                    std::max(worst_wall, std::fabs(cp.wall_identity_residual(t, x1, x2)));
            }
            std::ostringstream nm;
            nm << "corrector_divBw_delta_" << dd;
            em.check(nm.str(), worst_div, 1e-10, -1);
            std::ostringstream nm2;
            nm2 << "corrector_wall_identity_delta_" << dd;
            em.check(nm2.str(), worst_wall, 1e-12, -1);
        }
    }

    // boundary-layer identities and scalings
    {
        const double tmid = 0.5 * cfg.time.t_end;
        em.check("bl_div_residual", s.bl->divergence_residual(tmid, 10000, unsigned(seed)),
                 1e-10, -1);
        em.check("bl_div_residual_dense",
                 s.bl->divergence_residual(tmid, 40000, unsigned(seed) + 1), 1e-10, -1);
        // wall and support values
        double worst_wall = 0.0, worst_sup = 0.0, worst_bb3 = 0.0;
        std::mt19937_64 rng(seed + 2);
        std::uniform_real_distribution<double> ux(0.0, cfg.geometry.period);
        std::uniform_real_distribution<double> uz(0.0, 1.2);
        const double a = s.bl->width();
        for (int k = 0; k < 10000; ++k) {
            double x1 = ux(rng), x2 = ux(rng);
            for (int c = 0; c < 3; ++c) {
                worst_wall = std::max(worst_wall,
                                      std::fabs(s.bl->bl(c, tmid, x1, x2, 0.0) +
                                                s.pair->w(c, tmid, x1, x2, 0.0)));
                worst_sup =
                    std::max(worst_sup, std::fabs(s.bl->bl(c, tmid, x1, x2, 2.0 * a)));
            }
            double y3 = uz(rng) * a;
            worst_bb3 = std::max(worst_bb3,
                                 std::fabs(s.bl->Bbl3_assembled(tmid, x1, x2, y3) -
                                           s.bl->Bbl3_compact(tmid, x1, x2, y3)));
        }
        em.check("bl_wall_matches_minus_w", worst_wall, 1e-12, -1);
        em.check("bl_support_beyond_width", worst_sup, 0.0, -1);
        em.check("bl_BB3_identity", worst_bb3, 1e-12, -1);

        std::vector<double> tn_grid;
        for (int i = 0; i <= 8; ++i) tn_grid.push_back(1e-8 * std::pow(10.0, i * 0.5));
        auto rows = s.bl->slope_report(tmid, tn_grid);
        for (const auto& r : rows) {
            em.check("bl_slope_" + r.name, std::fabs(r.fitted_slope - r.target_slope),
                     0.02, -1);
            if (!std::isfinite(r.max_ratio)) {
                em.note("bl_ratio_" + r.name, "non-finite");
                ++em.failures;
            }
        }
        // quadrature cross-check at one scale
        auto closed = s.bl->closed_norms(tmid, 1e-6);
        auto quad = s.bl->quadrature_norms(tmid, 1e-6);
        double worst_rel = 0.0;
        for (int i = 0; i < kLayerQuantities; ++i)
            if (closed.v[i] > 0)
                worst_rel = std::max(worst_rel,
                                     std::fabs(quad.v[i] - closed.v[i]) / closed.v[i]);
        em.check("bl_quadrature_vs_closed", worst_rel, 1e-6, -1);
    }

    // transformed ellipticity sandwich
    {
        auto rep = sandwich_check(*s.visc, *s.geom, 200000, cfg.time.t_end, unsigned(seed));
        em.check("sandwich_min_lower", rep.min_lower, 0.5 * s.triple.Lambda, 1);
        em.check("sandwich_violations", double(rep.violations), 0.0, -1);
        em.check("sandwich_max_upper_finite", rep.max_upper, 1e6, -1);
        em.check("sandwich_max_cross_finite", rep.max_cross, 1e6, -1);
        if (!rep.witness.empty()) em.note("sandwich_witness", rep.witness);
    }

    // corrector estimate ratios (the H^1/L^inf set) across three deltas
    {
        Grid ngrid(32, 32, 64, cfg.geometry.period, GridMap{cfg.grid.height, 0.0});
        Ops ops(ngrid);
        Norms norms(ops);
        const double t = 0.5 * cfg.time.t_end;
        Field W(ngrid, 3);
        sample3(ngrid, t, W, [&](int c, double x1, double x2, double y3) {
            return s.flow->w0(c, t, x1, x2, y3);
        });
        const double Whs = norms.hk(W, 3);
        struct Ratios {
            double c1, c2, d, e1, e2, f1, f2, g;
        };
        std::vector<Ratios> all;
        for (double dd : {0.1, 0.01, 0.001}) {
            FlatteningMap gm(s.profile, dd, cfg.geometry.alpha);
            CorrectorPair cp(*s.flow, gm);
            Field f(ngrid, 3);
            Ratios r{};
            sample3(ngrid, t, f, [&](int c, double x1, double x2, double y3) {
                return cp.dt_wt(c, t, x1, x2, y3);
            });
            Field F0(ngrid, 3);
            sample3(ngrid, t, F0, [&](int c, double x1, double x2, double y3) {
                return s.flow->f0(c, t, x1, x2, y3);
            });
            double denom_c = Whs * Whs + norms.hk(F0, 2);
            r.c1 = norms.l2(f) / denom_c;
            sample3(ngrid, t, f, [&](int c, double x1, double x2, double y3) {
                return s.flow->dt_w0(c, t, x1, x2, y3);
            });
            r.c2 = norms.hk(f, 1) / denom_c;
            // trace H1 of w at the wall
            sample3(ngrid, t, f, [&](int c, double x1, double x2, double y3) {
                (void)y3;
                return cp.w(c, t, x1, x2, 0.0);
            });
            r.d = norms.trace_h1(f) / Whs;
            sample3(ngrid, t, f, [&](int c, double x1, double x2, double y3) {
                return cp.wt(c, t, x1, x2, y3);
            });
            r.e1 = norms.hk(f, 1) / Whs;
            sample3(ngrid, t, f, [&](int c, double x1, double x2, double y3) {
                return cp.w(c, t, x1, x2, y3);
            });
            r.e2 = norms.hk(f, 1) / Whs;
            r.f1 = norms.linf(f) / Whs;
            double gsup = 0.0;
            for (int dir = 1; dir <= 3; ++dir) {
                sample3(ngrid, t, f, [&](int c, double x1, double x2, double y3) {
                    return cp.w_d(c, dir, t, x1, x2, y3);
                });
                gsup = std::max(gsup, norms.linf(f));
            }
            r.f2 = gsup / Whs;
            sample3(ngrid, t, f, [&](int c, double x1, double x2, double y3) {
                (void)y3;
                return cp.w(c, t, x1, x2, 0.0);
            });
            const std::size_t pl = ngrid.plane();
            double tr_sup = 0.0;
            for (int c = 0; c < 3; ++c)
                tr_sup = std::max(tr_sup, simd::max_abs(f.comp(c), pl));
            r.g = tr_sup / Whs;
            all.push_back(r);
        }
        auto stable = [&](auto sel, const char* name) {
            double lo = 1e300, hi = 0.0;
            for (const auto& r : all) {
                double v = sel(r);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            em.check(std::string("wprop_stable_") + name, hi / std::max(lo, 1e-300),
                     1.2001, -1);
            em.check(std::string("wprop_finite_") + name, hi, 1e6, -1);
        };
        stable([](const Ratios& r) { return r.c1; }, "dt_wt");
        stable([](const Ratios& r) { return r.c2; }, "dt_w0_h1");
        stable([](const Ratios& r) { return r.d; }, "trace_h1");
        stable([](const Ratios& r) { return r.e1; }, "wt_h1");
        stable([](const Ratios& r) { return r.e2; }, "w_h1");
        stable([](const Ratios& r) { return r.f1; }, "w_linf");
        stable([](const Ratios& r) { return r.f2; }, "grad_w_linf");
        stable([](const Ratios& r) { return r.g; }, "trace_linf");
    }

    if (!s.grid_notes.empty()) em.note("grid", s.grid_notes);
    log << (em.failures == 0 ? "check: all passed\n"
                             : "check: " + std::to_string(em.failures) + " failure(s)\n");
    return em.failures == 0 ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed,
              int jobs, std::ostream& log) {
    fs::create_directories(out_dir);
    struct Point {
        RunConfig cfg;
        int index;
        bool admissible;
        std::string reason;
        RunResult result;
        bool ran = false;
        std::string dir;
    };
    std::vector<Point> points;
    for (int i = 0; i < cfg.sweep.count; ++i) {
        Point p;
        p.cfg = cfg;
        p.index = i;
        double eta = cfg.sweep.eta_start * std::pow(cfg.sweep.eta_ratio, i);
        p.cfg.viscosity.eta = eta;
        p.cfg.viscosity.nu = std::pow(eta, cfg.sweep.nu_power);
        if (cfg.sweep.delta_mode == "eta") p.cfg.geometry.delta = eta;
        p.cfg.grid.strict = false;  // sweeps relax the oscillation-resolution gate
        char nm[32];
        std::snprintf(nm, sizeof(nm), "/run_%03d", i);
        p.dir = out_dir + nm;
        ParamTriple t;
        t.eta = p.cfg.viscosity.eta;
        t.nu = p.cfg.viscosity.nu;
        t.delta = p.cfg.geometry.delta;
        t.alpha = p.cfg.geometry.alpha;
        t.Lambda = p.cfg.viscosity.lambda;
        t.K0 = p.cfg.params.k0;
        t.delta0 = p.cfg.params.delta0;
        t.epsilon = p.cfg.params.epsilon;
        auto v = is_admissible(t);
        p.admissible = v.ok;
        p.reason = v.reason;
        points.push_back(std::move(p));
    }

    int admissible_count = 0;
    for (const auto& p : points)
        if (p.admissible) ++admissible_count;
    if (admissible_count == 0) {
        log << "sweep: no admissible points\n";
        for (const auto& p : points)
            log << "  point " << p.index << " skipped: " << p.reason << "\n";
        return 1;
    }
    if (admissible_count < 4)
        log << "sweep: warning, only " << admissible_count << " admissible points\n";

    // fan out, one run per worker
    std::vector<std::thread> workers;
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto work = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            Point& p = points[i];
            if (!p.admissible) continue;
            try {
                p.result = run_one(p.cfg, p.dir, seed + p.index, nullptr);
                p.ran = true;
            } catch (const std::exception& e) {
                p.reason = e.what();
                p.ran = false;
            }
            std::lock_guard<std::mutex> lk(log_mutex);
            log << "sweep point " << p.index << " eta=" << p.cfg.viscosity.eta
                << (p.ran ? " done" : (" failed: " + p.reason)) << "\n";
        }
    };
    jobs = std::max(1, jobs);
    for (int j = 0; j < jobs; ++j) workers.emplace_back(work);
    for (auto& w : workers) w.join();

    // aggregate (sorted by beta, descending)
    std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
        return a.cfg.viscosity.eta > b.cfg.viscosity.eta;
    });
    std::vector<double> lbudget, lerr, Ms;
    {
        auto header = kRunHeader;
        header.insert(header.begin(), "point");
        CsvWriter sw(out_dir + "/sweep.csv", header);
        CsvWriter pw(out_dir + "/error_vs_budget.csv",
                     {"beta", "budget", "sup_err", "M", "grad_budget_v",
                      "budget_sq_ratio"});
        for (auto& p : points) {
            if (!p.ran) continue;
            const auto& r = p.result.record;
            std::vector<double> row = {
                double(p.index), r.eta, r.nu, r.delta, p.cfg.geometry.alpha, r.beta,
                r.budget, p.result.theta, r.sup_err, r.M, r.grad_metric,
                r.grad_budget_v, r.bl_l2_sup, r.v_sup, p.result.env_M,
                p.result.env_excess, p.result.max_defect, p.result.max_divBu,
                p.result.max_adv_cancel, r.energy_C, p.result.C0, p.result.C1,
                p.result.C2, p.result.v_init, p.result.init_offset,
                double(p.result.steps), p.result.completed ? 1.0 : 0.0,
                p.result.osc_resolved ? 1.0 : 0.0, p.result.grading_ratio,
                double(seed + p.index)};
            sw.row(row);
            pw.row({r.beta, r.budget, r.sup_err, r.M, r.grad_budget_v,
                    r.grad_budget_v / (r.budget * r.budget)});
            lbudget.push_back(r.budget);
            lerr.push_back(r.sup_err);
            Ms.push_back(r.M);
        }
    }

    std::ofstream summary(out_dir + "/summary.txt");
    for (const auto& p : points)
        if (!p.admissible)
            summary << "point " << p.index << " inadmissible: " << p.reason << "\n";
    if (lerr.size() >= 2) {
        double slope = loglog_slope(lbudget, lerr);
        double mmin = *std::min_element(Ms.begin(), Ms.end());
        double mmax = *std::max_element(Ms.begin(), Ms.end());
        summary << "runs " << lerr.size() << "\n";
        summary << "error_vs_budget_slope " << format_double(slope) << "\n";
        summary << "M_min " << format_double(mmin) << "\nM_max " << format_double(mmax)
                << "\nM_spread " << format_double(mmax / mmin) << "\n";
        log << "sweep: slope=" << slope << " M in [" << mmin << ", " << mmax << "]\n";
    }
    return 0;
}

int cmd_report(const std::string& out_dir, std::ostream& log) {
    // collect run.csv rows from the directory and its run_* children
    std::vector<std::pair<std::string, CsvTable>> runs;
    auto try_read = [&](const std::string& path) -> bool {
        if (!fs::exists(path)) return false;
        try {
            runs.emplace_back(path, read_csv(path));
            return true;
        } catch (const std::exception& e) {
            log << "report: corrupt csv " << path << ": " << e.what() << "\n";
            runs.clear();
            runs.emplace_back(std::string("!") + path, CsvTable{});
            return false;
        }
    };
    if (!fs::exists(out_dir)) {
        log << "report: no runs found\n";
        return 1;
    }
    bool corrupt = false;
    if (fs::exists(out_dir + "/run.csv"))
        corrupt |= !try_read(out_dir + "/run.csv");
    for (const auto& entry : fs::directory_iterator(out_dir)) {
        if (!entry.is_directory()) continue;
        std::string p = entry.path().string() + "/run.csv";
        if (fs::exists(p)) corrupt |= !try_read(p);
    }
    if (corrupt) return 1;
    if (runs.empty()) {
        log << "report: no runs found\n";
        return 1;
    }

    // merge rows, sort by beta descending
    const auto& header = runs.front().second.header;
    std::vector<std::vector<std::string>> rows;
    for (auto& [path, table] : runs) {
        if (table.header != header) {
            log << "report: header mismatch in " << path << "\n";
            return 1;
        }
        for (auto& r : table.rows) rows.push_back(r);
    }
    int bcol = runs.front().second.col("beta");
    std::sort(rows.begin(), rows.end(),
              [&](const std::vector<std::string>& a, const std::vector<std::string>& b) {
                  return std::stod(a[bcol]) > std::stod(b[bcol]);
              });

    CsvWriter out(out_dir + "/report.csv", header);
    for (auto& r : rows) out.row_mixed(r);

    std::ofstream txt(out_dir + "/report.txt");
    txt << "runs " << rows.size() << "\n";
    int ecol = runs.front().second.col("sup_err");
    int gcol = runs.front().second.col("budget");
    int mcol = runs.front().second.col("M");
    for (auto& r : rows)
        txt << "beta " << r[bcol] << "  budget " << r[gcol] << "  sup_err " << r[ecol]
            << "  M " << r[mcol] << "\n";
    if (rows.size() >= 2) {
        std::vector<double> b, e;
        for (auto& r : rows) {
            b.push_back(std::stod(r[gcol]));
            e.push_back(std::stod(r[ecol]));
        }
        txt << "error_vs_budget_slope " << format_double(loglog_slope(b, e)) << "\n";
    }
    log << "report: " << rows.size() << " run(s) merged\n";
    return 0;
}

} // namespace invlab
