#include "gcflow/flow.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "gcflow/quadrature.hpp"

namespace gcflow {

namespace {

constexpr double kAlphaTol = 1e-12;

bool state_usable(const ArrayXd& rho) {
    return rho.allFinite() && (rho > 0.0).all();
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

} // namespace

const char* to_string(Regime r) {
    switch (r) {
        case Regime::expanding: return "convergent(alpha>n+1)";
        case Regime::alexandrov: return "convergent(alpha=n+1,f<1)";
        case Regime::even_alexandrov: return "convergent(alpha=n+1,even)";
        case Regime::normalized_even: return "convergent(normalized,even)";
        case Regime::exploratory: return "exploratory";
    }
    return "exploratory";
}

bool convergent_regime(Regime r) { return r != Regime::exploratory; }

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::converged: return "converged";
        case Verdict::timeout: return "timeout";
        case Verdict::step_failure: return "step_failure";
        case Verdict::curvature_breakdown: return "curvature_breakdown";
        case Verdict::invalid_initial: return "invalid_initial";
    }
    return "step_failure";
}

Regime classify_regime(const FlowProblem& p) {
    const double np1 = p.n + 1.0;
    const ArrayXd rho0 = sample_initial(p.initial, *p.grid);
    const bool symmetric_initial = evenness_defect(*p.grid, rho0) < 1e-12;
    if (p.mode == FlowMode::unnormalized) {
        if (p.alpha > np1 + kAlphaTol) return Regime::expanding;
        if (std::abs(p.alpha - np1) <= kAlphaTol) {
            if (p.fdata.f.maxCoeff() < 1.0) return Regime::alexandrov;
            if (p.fdata.even && symmetric_initial &&
                integrate(*p.grid, p.fdata.f_tilde) > p.grid->measure())
                return Regime::even_alexandrov;
        }
        return Regime::exploratory;
    }
    if (p.alpha > 2.0 + kAlphaTol && p.alpha <= np1 + kAlphaTol &&
        p.fdata.even && symmetric_initial)
        return Regime::normalized_even;
    return Regime::exploratory;
}

ArrayXd flow_rhs(const GeometryFields& fields, const ArrayXd& f, double alpha,
                 double eta_tilde) {
    return -fields.phi.pow(alpha) * f * fields.w * fields.K +
           eta_tilde * fields.phi;
}

double eta_normalized(const SphereGrid& grid, const GeometryFields& fields,
                      const ArrayXd& f_tilde, double alpha) {
    const double num =
        integrate(grid, fields.K / fields.u * fields.phi.pow(grid.n + 1));
    const double den =
        integrate(grid, fields.phi.pow(grid.n + 1 - alpha) * f_tilde);
    if (!(den > 1e-300))
        throw std::runtime_error("eta_normalized: degenerate denominator");
    return num / den;
}

double stable_dt(const SphereGrid& grid, const GeometryFields& fields,
                 const ArrayXd& f, double alpha, double cfl) {
    const int N = grid.N;
    double d_spec = 0.0, d_vn = 0.0;
    for (int j = 0; j < N; ++j) {
        double kap_min_abs = std::abs(fields.W11[j]);
        if (grid.n == 2)
            kap_min_abs = std::min(kap_min_abs, std::abs(fields.W22[j]));
        const double lam = 1.0 / std::max(kap_min_abs, 1e-30);
        const double base =
            std::pow(fields.phi[j], alpha - 2.0) * f[j] * fields.K[j] * lam;
        d_spec = std::max(d_spec, base / fields.w[j]);
        d_vn = std::max(d_vn, base / (fields.w[j] * fields.w[j]));
    }
    const double ds_min = fields.phi.minCoeff() * grid.dtheta;
    const double dt_spec = ds_min * ds_min / d_spec;
    const double dt_vn = grid.dtheta * grid.dtheta / d_vn;
    return cfl * std::min(dt_spec, dt_vn);
}

StepOutcome flow_step(const RadialState& state, const GeometryFields& fields,
                      const FlowProblem& p, Regime regime) {
    StepOutcome out;
    if ((fields.K <= 0.0).any() || !fields.K.allFinite()) {
        out.failure = Verdict::curvature_breakdown;
        out.reason = "Gauss curvature nonpositive";
        return out;
    }

    const bool normalized = p.mode == FlowMode::normalized;
    double eta1 = 1.0;
    if (normalized)
        eta1 = eta_normalized(*p.grid, fields, p.fdata.f_tilde, p.alpha);
    const ArrayXd k1 = flow_rhs(fields, p.fdata.f, p.alpha, eta1);

    double dt = stable_dt(*p.grid, fields, p.fdata.f, p.alpha, p.controls.cfl);
    const double vmax = k1.abs().maxCoeff();
    if (vmax > 0.0)
        dt = std::min(dt, p.controls.cfl * state.rho.minCoeff() / vmax);

    const bool require_convex = convergent_regime(regime);
    for (int h = 0; h <= p.controls.max_halvings; ++h, dt *= 0.5) {
        RadialState mid{state.grid, state.rho + dt * k1, state.t};
        if (!state_usable(mid.rho)) continue;
        GeometryFields fm = geometry_fields(mid);
        if (!fm.K.allFinite() || (fm.K <= 0.0).any()) continue;

        double eta2 = 1.0;
        if (normalized)
            eta2 = eta_normalized(*p.grid, fm, p.fdata.f_tilde, p.alpha);
        const ArrayXd k2 = flow_rhs(fm, p.fdata.f, p.alpha, eta2);

        RadialState next{state.grid, state.rho + 0.5 * dt * (k1 + k2),
                         state.t + dt};
        if (!state_usable(next.rho)) continue;
        GeometryFields fn = geometry_fields(next);
        if (!fn.K.allFinite() || (fn.K <= 0.0).any()) continue;
        if (require_convex && check_convex(fn).margin <= 0.0) continue;

        out.state = std::move(next);
        out.fields = std::move(fn);
        out.dt = dt;
        out.halvings = h;
        out.eta = normalized ? 0.5 * (eta1 + eta2) : 1.0;
        out.ok = true;
        return out;
    }
    out.failure = Verdict::step_failure;
    out.reason = "dt halvings exhausted";
    return out;
}

namespace {

TraceRow make_row(const FlowProblem& p, const RadialState& state,
                  const GeometryFields& fields, const ResidualReport& res,
                  const FunctionalConfig& cfg, double dt, double eta,
                  long step) {
    const SphereGrid& grid = *p.grid;
    TraceRow row;
    row.t = state.t;
    row.dt = dt;
    row.step = step;
    row.rho_min = state.rho.minCoeff();
    row.rho_max = state.rho.maxCoeff();
    row.grad_max = fields.grad.abs().maxCoeff();
    row.kappa_min = fields.kappa_min.minCoeff();
    row.kappa_max = fields.kappa_max.maxCoeff();
    row.u_min = fields.u.minCoeff();
    const ArrayXd theta = theta_diagnostic(fields, p.fdata.f, p.alpha);
    row.theta_min = theta.minCoeff();
    row.theta_max = theta.maxCoeff();
    row.residual_linf = res.linf;
    row.residual_l2 = res.l2;
    row.eta = eta;
    row.c_star = res.c_star;
    row.evenness_defect = evenness_defect(grid, state.rho);
    row.conserved =
        conserved_integral(grid, state.rho, p.fdata.f_tilde, p.alpha, cfg);
    if (check_convex(fields).uniformly_convex) {
        const KleinState ks = klein_project(state, fields);
        row.Q = q_functional(grid, ks, p.fdata.f_tilde, p.alpha, cfg);
        row.J = j_functional(grid, ks, cfg);
    } else {
        row.Q = nan();
        row.J = nan();
    }
    return row;
}

} // namespace

FlowResult run_flow(const FlowProblem& p, const TraceObserver& observer) {
    const auto t_start = std::chrono::steady_clock::now();
    FlowResult result;
    result.regime = classify_regime(p);

    RadialState state{p.grid, sample_initial(p.initial, *p.grid), 0.0};
    if (!state_usable(state.rho)) {
        result.verdict = Verdict::invalid_initial;
        result.reason = "initial profile not positive";
        result.final_state = std::move(state);
        return result;
    }
    GeometryFields fields = geometry_fields(state);
    if (!fields.star_shaped) {
        result.verdict = Verdict::invalid_initial;
        result.reason = "initial hypersurface not star-shaped";
        result.final_state = std::move(state);
        return result;
    }
    if (convergent_regime(result.regime) &&
        !check_convex(fields).uniformly_convex) {
        result.verdict = Verdict::invalid_initial;
        result.reason = "initial hypersurface not uniformly convex";
        result.final_state = std::move(state);
        return result;
    }

    result.cfg = freeze_config(state, fields, klein_project(state, fields));

    const bool normalized = p.mode == FlowMode::normalized;
    double last_dt = 0.0, last_eta = 1.0;
    if (normalized) {
        try {
            last_eta = eta_normalized(*p.grid, fields, p.fdata.f_tilde, p.alpha);
        } catch (const std::exception& e) {
            result.verdict = Verdict::invalid_initial;
            result.reason = e.what();
            result.final_state = std::move(state);
            return result;
        }
    }
    long steps = 0;
    long last_recorded = -1;

    auto record = [&](const ResidualReport& res) {
        result.trace.push_back(make_row(p, state, fields, res, result.cfg,
                                        last_dt, last_eta, steps));
        last_recorded = steps;
        if (observer) observer(state, fields, result.trace.back());
    };

    while (true) {
        const ResidualReport res =
            residual(*p.grid, fields, p.fdata.f_tilde, p.alpha, normalized);
        result.c_star = res.c_star;
        if (steps == 0 ||
            (steps % p.controls.trace_stride == 0 && steps != last_recorded))
            record(res);

        if (res.linf < p.controls.tol_rel) {
            result.verdict = Verdict::converged;
            if (last_recorded != steps) record(res);
            break;
        }
        if (state.t >= p.controls.t_max) {
            result.verdict = Verdict::timeout;
            if (last_recorded != steps) record(res);
            break;
        }

        StepOutcome out;
        try {
            out = flow_step(state, fields, p, result.regime);
        } catch (const std::exception& e) {
            result.verdict = Verdict::step_failure;
            result.reason = e.what();
            break;
        }
        if (!out.ok) {
            result.verdict = out.failure;
            result.reason = out.reason;
            break;
        }
        state = std::move(out.state);
        fields = std::move(out.fields);
        last_dt = out.dt;
        last_eta = out.eta;
        ++steps;
    }

    result.final_state = std::move(state);
    result.steps = steps;
    result.eta_final = last_eta;
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    return result;
}

MaxPrincipleWitness max_principle_witness(const SphereGrid& grid,
                                          const GeometryFields& fields,
                                          const ArrayXd& f, double alpha) {
    MaxPrincipleWitness w;
    // ties -> lowest index
    int jm = 0;
    for (int j = 1; j < grid.N; ++j)
        if (fields.phi[j] > fields.phi[jm]) jm = j;
    w.argmax = jm;

    const ArrayXd drho = flow_rhs(fields, f, alpha, 1.0);
    w.rhs_value = drho[jm];
    const double phi = fields.phi[jm], phip = fields.phi_prime[jm];
    const int n = grid.n;
    w.bound = phi * (1.0 - std::pow(phi, alpha - n - 1.0) *
                               std::pow(phip, n) * f[jm]);

    const ArrayXd d3 = d1(grid, fields.rho_dd);
    const double m3 = d3.abs().maxCoeff();
    const double m2 = fields.rho_dd.abs().maxCoeff();
    const double ratio = phip / phi;
    const double scale = std::pow(phi, alpha - 2.0) * f[jm];
    w.slack = scale * (n * std::pow(std::max(1.0, ratio), n - 1) * 2.0 *
                           grid.dtheta * m3 +
                       6.0 * std::pow(grid.dtheta * m2, 2) +
                       6.0 * ratio * fields.grad[jm] * fields.grad[jm]) +
              1e-12 * (1.0 + std::abs(w.bound));
    w.ok = w.rhs_value <= w.bound + w.slack;
    return w;
}

double gradient_bound(double rho_min, double rho_max) {
    return std::sinh(rho_max) *
           std::sqrt(std::exp(4.0 * rho_max * std::tanh(rho_min)) - 1.0);
}

double c0_upper_radius(double alpha, double f_min) {
    return std::asinh(std::pow(f_min, -1.0 / (alpha - 1.0)));
}

double c0_lower_radius(double alpha, int n, double f_max) {
    auto g = [&](double rho) {
        return std::pow(std::sinh(rho), alpha - n - 1.0) *
                   std::pow(std::cosh(rho), n) * f_max -
               1.0;
    };
    double lo = 1e-12, hi = 30.0;
    if (g(lo) >= 0.0 || g(hi) <= 0.0)
        return std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace gcflow
