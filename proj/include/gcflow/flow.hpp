#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gcflow/functionals.hpp"

namespace gcflow {

enum class FlowMode { unnormalized, normalized };

//! Hypothesis class the run falls under. The first four are the convergent
//! regimes; anything else runs as exploratory (permitted, flagged).
enum class Regime {
    expanding,        // unnormalized, alpha > n+1
    alexandrov,       // unnormalized, alpha = n+1, f < 1
    even_alexandrov,  // unnormalized, alpha = n+1, even data, int f_tilde > |S^n|
    normalized_even,  // normalized, 2 < alpha <= n+1, even data
    exploratory
};

const char* to_string(Regime r);
bool convergent_regime(Regime r);

enum class Verdict {
    converged,
    timeout,
    step_failure,
    curvature_breakdown,
    invalid_initial
};

const char* to_string(Verdict v);

struct NumericControls {
    double cfl = 0.2;       // safety factor on the parabolic step bound
    double tol_rel = 1e-8;  // convergence tolerance on the normalized residual
    double t_max = 50.0;
    int max_halvings = 30;
    int trace_stride = 25;  // steps between diagnostic records
};

struct FlowProblem {
    std::shared_ptr<const SphereGrid> grid;
    int n = 1;
    double alpha = 2.0;
    FlowMode mode = FlowMode::unnormalized;
    PrescribedData fdata;
    InitialShape initial;
    NumericControls controls;
};

Regime classify_regime(const FlowProblem& problem);

//! One record of the diagnostics time series.
struct TraceRow {
    double t = 0, dt = 0;
    double rho_min = 0, rho_max = 0, grad_max = 0;
    double kappa_min = 0, kappa_max = 0, u_min = 0;
    double theta_min = 0, theta_max = 0;  // extrema of phi^alpha f K
    double residual_linf = 0, residual_l2 = 0;
    double Q = 0, J = 0, conserved = 0;
    double eta = 1, c_star = 1;
    double evenness_defect = 0;
    long step = 0;  // not serialized
};

//! Time derivative of rho: -phi^alpha f w K + eta_tilde phi.
ArrayXd flow_rhs(const GeometryFields& fields, const ArrayXd& f, double alpha,
                 double eta_tilde);

//! Global term of the normalized flow,
//!   eta = int (K/u) phi^(n+1) dtheta / int phi^(n+1-alpha) f^-1 dtheta.
double eta_normalized(const SphereGrid& grid, const GeometryFields& fields,
                      const ArrayXd& f_tilde, double alpha);

//! Parabolic step bound: cfl * min of an arc-spacing estimate and a
//! von-Neumann-style coordinate-space bound, both driven by the linearized
//! diffusivity phi^(alpha-2) f K lambda_max(W^-1).
double stable_dt(const SphereGrid& grid, const GeometryFields& fields,
                 const ArrayXd& f, double alpha, double cfl);

struct StepOutcome {
    RadialState state;
    GeometryFields fields;
    double dt = 0;
    int halvings = 0;
    double eta = 1.0;
    bool ok = false;
    Verdict failure = Verdict::step_failure;
    std::string reason;
};

//! One adaptive Heun step; `fields` must be the geometry of `state`. Retries
//! with halved dt on convexity loss (convergent-regime runs) or non-finite
//! values, up to controls.max_halvings.
StepOutcome flow_step(const RadialState& state, const GeometryFields& fields,
                      const FlowProblem& problem, Regime regime);

struct FlowResult {
    RadialState final_state;
    std::vector<TraceRow> trace;
    Verdict verdict = Verdict::step_failure;
    Regime regime = Regime::exploratory;
    std::string reason;
    double c_star = 1.0;
    double eta_final = 1.0;
    long steps = 0;
    double wall_time_s = 0.0;
    FunctionalConfig cfg;
};

//! Called at every recorded trace row with the full state and geometry.
using TraceObserver =
    std::function<void(const RadialState&, const GeometryFields&, const TraceRow&)>;

//! Integrates the flow until the residual drops below tol_rel, t exceeds
//! t_max, or a failure occurs. Math-domain trouble becomes a verdict, never
//! an exception.
FlowResult run_flow(const FlowProblem& problem, const TraceObserver& observer = {});

//! Discrete maximum-principle witness at the argmax of rho (ties -> lowest
//! index): the computed rhs must not exceed phi (1 - phi^(alpha-n-1) phi'^n f)
//! by more than a resolution-scaled slack.
struct MaxPrincipleWitness {
    int argmax = 0;
    double rhs_value = 0;
    double bound = 0;
    double slack = 0;
    bool ok = false;
};

MaxPrincipleWitness max_principle_witness(const SphereGrid& grid,
                                          const GeometryFields& fields,
                                          const ArrayXd& f, double alpha);

//! Gradient bound implied by the radial extrema of a uniformly convex state.
double gradient_bound(double rho_min, double rho_max);

//! Radius above which the unnormalized flow pushes the max of rho down:
//! sinh^(alpha-1)(rho) min_f = 1.
double c0_upper_radius(double alpha, double f_min);

//! Radius below which the flow pushes the min of rho up, i.e. the root of
//! sinh^(alpha-n-1) cosh^n (rho) max_f = 1; +inf when no root exists.
double c0_lower_radius(double alpha, int n, double f_max);

} // namespace gcflow
