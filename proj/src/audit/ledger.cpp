#include "invlab/audit/ledger.hpp"

#include <cmath>

#include "invlab/simd/kernels.hpp"

namespace invlab {

namespace {

template <class F>
void sample(const Grid& g, double t, Field& out, F fn) {
    for (int c = 0; c < 3; ++c)
        for (int j = 0; j <= g.n3; ++j)
            for (int i2 = 0; i2 < g.n2; ++i2)
                for (int i1 = 0; i1 < g.n1; ++i1)
                    out.at(c, j, i2, i1) = fn(c, g.x1(i1), g.x2(i2), g.y[j]);
    out.set_time(t);
}

} // namespace

EnergyAudit::EnergyAudit(NseSolver& solver, const CorrectorPair& pair,
                         const BoundaryLayerField& bl, const ParamTriple& p,
                         int cadence)
    : solver_(&solver),
      pair_(&pair),
      bl_(&bl),
      p_(p),
      cadence_(std::max(cadence, 1)),
      norms_(solver.ops()) {
    const Grid& g = solver.grid();
    const ReferenceFlow& flow = pair.flow();
    // F0(t) = P'(t) W + P(t)^2 V + Q with W = w0(0,.), V = (W.grad)W, Q = grad q
    Field W(g, 3), V(g, 3), Q(g, 3);
    sample(g, 0.0, W, [&](int c, double x1, double x2, double y3) {
        return flow.w0(c, 0.0, x1, x2, y3);
    });
    sample(g, 0.0, V, [&](int c, double x1, double x2, double y3) {
        double adv = 0.0;
        for (int k = 0; k < 3; ++k) {
            double wk = flow.w0(k, 0.0, x1, x2, y3);
            if (wk == 0.0) continue;
            adv += wk * flow.w0_d(c, k == 0, k == 1, k == 2, 0.0, x1, x2, y3);
        }
        return adv;
    });
    sample(g, 0.0, Q, [&](int c, double x1, double x2, double y3) {
        return flow.q_d(c + 1, 0.0, x1, x2, y3);
    });
    Wbase_h3_ = norms_.hk(W, 3);
    const Field* f3[3] = {&W, &V, &Q};
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            gram_l2_[i][j] = gram_l2_[j][i] = norms_.inner(*f3[i], *f3[j]);
            gram_h2_[i][j] = gram_h2_[j][i] = norms_.hk_inner(*f3[i], *f3[j], 2);
        }
}

void EnergyAudit::attach() {
    solver_->set_observer([this](const StepRecord& rec) { on_step(rec); });
}

void EnergyAudit::sample_w(double t, Field& f) const {
    sample(solver_->grid(), t, f, [&](int c, double x1, double x2, double y3) {
        return pair_->w(c, t, x1, x2, y3);
    });
}

void EnergyAudit::sample_bl(double t, Field& f) const {
    sample(solver_->grid(), t, f, [&](int c, double x1, double x2, double y3) {
        return bl_->bl(c, t, x1, x2, y3);
    });
}

void EnergyAudit::sample_dt_bl(double t, Field& f) const {
    sample(solver_->grid(), t, f, [&](int c, double x1, double x2, double y3) {
        return bl_->dt_bl(c, t, x1, x2, y3);
    });
}

void EnergyAudit::on_step(const StepRecord& rec) {
    const bool audit_now = ((rec.n - 1) % cadence_ == 0);
    if (rec.n == 1) {
        // capture ||v(0)|| regardless of cadence
        const Grid& g = solver_->grid();
        Field sw(g, 3), sb(g, 3), v0(g, 3);
        sample_w(rec.t0, sw);
        sample_bl(rec.t0, sb);
        for (std::size_t i = 0; i < v0.size(); ++i)
            v0.data()[i] = rec.u0->data()[i] - sw.data()[i] - sb.data()[i];
        v_init_ = norms_.l2(v0);
    }
    if (!audit_now) return;

    const Grid& g = solver_->grid();
    const double dt = rec.dt;
    const double tm = 0.5 * (rec.t0 + rec.t1);
    const ReferenceFlow& flow = pair_->flow();

    Field sw0(g, 3), sw1(g, 3), sb0(g, 3), sb1(g, 3);
    sample_w(rec.t0, sw0);
    sample_w(rec.t1, sw1);
    sample_bl(rec.t0, sb0);
    sample_bl(rec.t1, sb1);

    Field v0(g, 3), v1(g, 3), vm(g, 3);
    for (std::size_t i = 0; i < v0.size(); ++i) {
        v0.data()[i] = rec.u0->data()[i] - sw0.data()[i] - sb0.data()[i];
        v1.data()[i] = rec.u1->data()[i] - sw1.data()[i] - sb1.data()[i];
        vm.data()[i] = 0.5 * (v0.data()[i] + v1.data()[i]);
    }

    LedgerRow row;
    row.n = rec.n;
    row.t_mid = tm;
    double v0sq = norms_.l2sq(v0), v1sq = norms_.l2sq(v1);
    row.v_l2_0 = std::sqrt(v0sq);
    row.v_l2_1 = std::sqrt(v1sq);
    row.lhs_time = (v1sq - v0sq) / (2.0 * dt);

    // scheme-mirrored dissipation: ustar = u1 + B* gradc(lambda)
    Field vstar(g, 3);
    {
        Field pf(g, 3);
        solver_->projector().pressure_force(*rec.lambda, pf);
        for (std::size_t i = 0; i < vstar.size(); ++i)
            vstar.data()[i] = rec.u1->data()[i] + pf.data()[i] - sw1.data()[i] -
                              sb1.data()[i];
    }
    row.diss_mirror = 0.5 * (solver_->dissipation(rec.s1, vstar, vm) +
                             solver_->dissipation(rec.s0, v0, vm));
    {
        Field stot0(g, 3), stot1(g, 3);
        for (std::size_t i = 0; i < stot0.size(); ++i) {
            stot0.data()[i] = sw0.data()[i] + sb0.data()[i];
            stot1.data()[i] = sw1.data()[i] + sb1.data()[i];
        }
        row.T_diffcross = -0.5 * (solver_->dissipation(rec.s1, stot1, vm) +
                                  solver_->dissipation(rec.s0, stot0, vm));
    }
    row.diss_sym = solver_->dissipation(solver_->flip_sign(tm), vm, vm);

    // advection pieces at the midpoint
    Field swm(g, 3), sbm(g, 3);
    sample_w(tm, swm);
    sample_bl(tm, sbm);
    Field nfield(g, 3);
    auto tested = [&](const Field& a, const Field& b) {
        solver_->apply_N(a, b, nfield);
        double s = 0.0;
        for (int c = 0; c < 3; ++c)
            s += solver_->ops().inner_node(nfield.comp(c), vm.comp(c));
        return s;
    };
    row.T_advB = -(tested(swm, sbm) + tested(sbm, sbm) + tested(sbm, swm));
    row.T_vw = -tested(vm, swm);
    row.T_vB = -tested(vm, sbm);
    row.T_cancel = -(tested(vm, vm) + tested(swm, vm) + tested(sbm, vm));

    // closed-form groups at the midpoint
    Field cf(g, 3);
    sample_dt_bl(tm, cf);
    row.T_dtB = -norms_.inner(cf, vm);

    const double dp = pair_->delta_pow();
    sample(g, tm, cf, [&](int c, double x1, double x2, double y3) {
        double v = pair_->dt_wt(c, tm, x1, x2, y3);
        for (int k = 0; k < 3; ++k) {
            double w0k = flow.w0(k, tm, x1, x2, y3);
            if (w0k != 0.0) v += w0k * pair_->wt_d(c, k + 1, tm, x1, x2, y3);
            double wtk = pair_->wt(k, tm, x1, x2, y3);
            if (wtk != 0.0) v += wtk * pair_->w_d(c, k + 1, tm, x1, x2, y3);
        }
        return v;
    });
    row.T_corr = dp * norms_.inner(cf, vm);

    const auto& geom = pair_->geom();
    const double da1 = std::pow(geom.delta, geom.alpha - 1.0);
    sample(g, tm, cf, [&](int c, double x1, double x2, double y3) {
        const double d = geom.delta;
        double g1 = geom.profile.d1(x1 / d, x2 / d);
        double g2 = geom.profile.d2(x1 / d, x2 / d);
        double bg3 = -(g1 * pair_->w(0, tm, x1, x2, y3) +
                       g2 * pair_->w(1, tm, x1, x2, y3));
        return bg3 * pair_->w_d(c, 3, tm, x1, x2, y3);
    });
    row.T_bg = -da1 * norms_.inner(cf, vm);

    if (flow.q_mode()) {
        sample(g, tm, cf, [&](int c, double x1, double x2, double y3) {
            return flow.q_d(c + 1, tm, x1, x2, y3);
        });
        row.T_qgrad = norms_.inner(cf, vm);
    }

    row.T_forcing = 0.0;  // F = F0 in this configuration path

    {
        CellField d(g);
        solver_->projector().divB(vm, d);
        row.T_pressure = solver_->ops().inner_cell(rec.p_total->data(), d.data());
    }

    row.rhs_sum = row.T_advB + row.T_vw + row.T_dtB + row.T_cancel + row.T_diffcross +
                  row.T_vB + row.T_forcing + row.T_corr + row.T_bg + row.T_qgrad +
                  row.T_pressure;
    row.defect = row.lhs_time + row.diss_mirror - row.rhs_sum;

    // norms entering the paper shapes
    const double Pm = flow.pulse(tm);
    row.w0_hs = std::fabs(Pm) * Wbase_h3_;
    {
        double a = flow.dpulse(tm), b = Pm * Pm;
        double co[3] = {a, b, 1.0};
        double l2 = 0.0, h2 = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                l2 += co[i] * co[j] * gram_l2_[i][j];
                h2 += co[i] * co[j] * gram_h2_[i][j];
            }
        row.f0_l2 = std::sqrt(std::max(l2, 0.0));
        row.f0_hs1 = std::sqrt(std::max(h2, 0.0));
    }

    // lemma ratios
    const double tn = bl_->theta_nu();
    const double tn14 = std::pow(tn, 0.25);
    const double vL = 0.5 * (row.v_l2_0 + row.v_l2_1);
    const double vsq = vL * vL;
    const double W = row.w0_hs;
    auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
    row.ratio_42i = ratio(std::fabs(row.T_advB), tn14 * W * W * vL);
    row.ratio_42ii = ratio(std::fabs(row.T_vw), W * vsq);
    row.ratio_42iii = ratio(std::fabs(row.T_dtB) + std::fabs(row.T_cancel),
                            tn14 * (W * W + row.f0_l2) * vL);
    {
        double eps = p_.epsilon;
        double bracket = p_.eta * (1.0 + std::sqrt(tn)) +
                         p_.nu * (1.0 + 1.0 / std::sqrt(tn));
        double excess = std::max(std::fabs(row.T_diffcross) - eps * row.diss_sym, 0.0);
        row.ratio_43 = ratio(excess * eps, bracket * W * W);
        row.ratio_44 = ratio(std::fabs(row.T_vB),
                             W * vsq + eps * row.diss_sym + eps * p_.nu * vsq);
    }
    row.ratio_45 = ratio(std::fabs(row.T_corr) / std::max(dp, 1e-300),
                         (W * W + row.f0_hs1) * vL);
    row.ratio_46 = ratio(std::fabs(row.T_bg) + std::fabs(row.T_qgrad),
                         da1 * (row.f0_l2 + W * W) * vL);

    // raw Gronwall coefficients (factor 2: the comparison tracks d(f^2)/dt)
    if (vsq > 1e-28) {
        row.f0_raw = 2.0 * (std::fabs(row.T_vw) + std::fabs(row.T_vB)) / vsq;
        row.f1_raw = 2.0 *
                     (std::fabs(row.T_advB) + std::fabs(row.T_dtB) +
                      std::fabs(row.T_cancel) + std::fabs(row.T_forcing) +
                      std::fabs(row.T_corr) + std::fabs(row.T_bg) +
                      std::fabs(row.T_qgrad) + std::fabs(row.T_pressure)) / vL;
        row.f2_raw = 2.0 * std::fabs(row.T_diffcross);
    } else {
        row.f0_raw = 0.0;
        row.f1_raw = 0.0;
        row.f2_raw = 2.0 * (std::fabs(row.T_diffcross) + std::fabs(row.T_advB) +
                            std::fabs(row.T_dtB) + std::fabs(row.T_cancel) +
                            std::fabs(row.T_forcing) + std::fabs(row.T_corr) +
                            std::fabs(row.T_bg) + std::fabs(row.T_qgrad) +
                            std::fabs(row.T_pressure));
    }

    rows_.push_back(row);
}

GronwallResult EnergyAudit::envelope() const {
    if (rows_.size() < 2) throw std::runtime_error("not enough audited steps");
    std::vector<double> t, f0, f1, f2;
    for (const auto& r : rows_) {
        t.push_back(r.t_mid);
        f0.push_back(r.f0_raw);
        f1.push_back(r.f1_raw);
        f2.push_back(r.f2_raw);
    }
    double gamma = p_.budget();
    return gronwall_envelope(t, f0, f1, f2, std::max(v_init_, 0.0), gamma);
}

double EnergyAudit::envelope_excess(const GronwallResult& env) const {
    double worst = -1e300;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        double vt = rows_[i].v_l2_1;
        double ye = std::sqrt(std::max(env.y[std::min(i, env.y.size() - 1)], 0.0));
        worst = std::max(worst, vt - ye);
    }
    return worst;
}

EnergyAudit::FittedConstants EnergyAudit::fitted_constants() const {
    FittedConstants c;
    const double tn14 = std::pow(bl_->theta_nu(), 0.25);
    const double dp = pair_->delta_pow();
    const double Wsup = pair_->flow().pulse_sup() * Wbase_h3_;
    for (const auto& r : rows_) {
        c.C0 = std::max(c.C0, r.f0_raw / (r.w0_hs + p_.nu));
        double s1 = (tn14 + dp) * (r.w0_hs * r.w0_hs + r.f0_hs1);
        if (s1 > 0) c.C1 = std::max(c.C1, r.f1_raw / s1);
        double s2 = (p_.eta + std::sqrt(p_.nu / p_.eta) * Wsup) * r.w0_hs * r.w0_hs;
        if (s2 > 0) c.C2 = std::max(c.C2, r.f2_raw / s2);
    }
    return c;
}

ConvergenceTracker::ConvergenceTracker(NseSolver& solver, const CorrectorPair& pair,
                                       const BoundaryLayerField& bl,
                                       const ParamTriple& p)
    : solver_(&solver), pair_(&pair), bl_(&bl), p_(p), norms_(solver.ops()) {}

void ConvergenceTracker::observe(const Field& u, double t) {
    const Grid& g = solver_->grid();
    Field w0(g, 3), v(g, 3);
    const ReferenceFlow& flow = pair_->flow();
    sample(g, t, w0, [&](int c, double x1, double x2, double y3) {
        return flow.w0(c, t, x1, x2, y3);
    });
    Field diff(g, 3);
    for (std::size_t i = 0; i < diff.size(); ++i)
        diff.data()[i] = u.data()[i] - w0.data()[i];
    sup_err_ = std::max(sup_err_, norms_.l2(diff));

    sample(g, t, v, [&](int c, double x1, double x2, double y3) {
        return pair_->w(c, t, x1, x2, y3) + bl_->bl(c, t, x1, x2, y3);
    });
    for (std::size_t i = 0; i < v.size(); ++i) v.data()[i] = u.data()[i] - v.data()[i];
    v_sup_ = std::max(v_sup_, norms_.l2(v));

    // direction-split gradient quadratures
    auto split = [&](const Field& f, double& horiz, double& vert) {
        const std::size_t nc = g.cells();
        std::vector<double> a(nc), b(nc), c3(nc);
        horiz = vert = 0.0;
        for (int m = 0; m < 3; ++m) {
            solver_->ops().gc12(f.comp(m), a.data(), b.data());
            solver_->ops().gc(f.comp(m), 3, c3.data());
            for (int j = 0; j < g.n3; ++j) {
                const std::size_t pl = g.plane();
                horiz += g.wc[j] * (simd::sumsq(a.data() + j * pl, pl) +
                                    simd::sumsq(b.data() + j * pl, pl));
                vert += g.wc[j] * simd::sumsq(c3.data() + j * pl, pl);
            }
        }
        horiz *= g.area_weight();
        vert *= g.area_weight();
    };
    double uh, uv, vh, vv;
    split(u, uh, uv);
    split(v, vh, vv);
    double av = p_.eta * vh + p_.nu * vv;
    double gu = uh + uv;

    if (!first_) {
        double h = t - last_t_;
        int_dh_u_ += 0.5 * h * (prev_dh_ + uh);
        int_dv_u_ += 0.5 * h * (prev_dv_ + uv);
        int_aniso_v_ += 0.5 * h * (prev_av_ + av);
        int_grad_u_ += 0.5 * h * (prev_gu_ + gu);
    }
    prev_dh_ = uh;
    prev_dv_ = uv;
    prev_av_ = av;
    prev_gu_ = gu;
    last_t_ = t;
    first_ = false;

    sup_u_sq_ = std::max(sup_u_sq_, norms_.l2sq(u));
    bl_sup_ = std::max(bl_sup_, bl_->l2_closed(t));
}

ConvergenceRecord ConvergenceTracker::finish(double f_l2_int, double u0_l2) {
    ConvergenceRecord rec;
    rec.eta = p_.eta;
    rec.nu = p_.nu;
    rec.delta = p_.delta;
    rec.beta = p_.beta_value;
    rec.budget = p_.budget();
    rec.sup_err = sup_err_;
    rec.grad_metric = p_.eta * std::sqrt(int_dh_u_) + p_.nu * std::sqrt(int_dv_u_);
    rec.grad_budget_v = int_aniso_v_;
    rec.bl_l2_sup = bl_sup_;
    rec.M = rec.budget > 0 ? rec.sup_err / rec.budget : 0.0;
    rec.v_sup = v_sup_;
    double denom = f_l2_int + u0_l2 * u0_l2;
    rec.energy_C = denom > 0 ? (sup_u_sq_ + int_grad_u_) / denom : 0.0;
    return rec;
}

} // namespace invlab
