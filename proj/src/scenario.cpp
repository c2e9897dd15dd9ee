#include "gcflow/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "gcflow/io.hpp"

namespace gcflow {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const json& require(const json& j, const std::string& key,
                    const std::string& path) {
    if (!j.contains(key)) throw ScenarioError(path + "." + key, "missing field");
    return j.at(key);
}

double number(const json& j, const std::string& key, const std::string& path,
              double fallback, bool required = false) {
    if (!j.contains(key)) {
        if (required) throw ScenarioError(path + "." + key, "missing field");
        return fallback;
    }
    if (!j.at(key).is_number())
        throw ScenarioError(path + "." + key, "expected a number");
    return j.at(key).get<double>();
}

PrescribedSpec parse_f_tilde(const json& j, const std::string& path) {
    PrescribedSpec spec;
    const std::string fam = require(j, "family", path).get<std::string>();
    if (fam == "constant")
        spec.family = PrescribedSpec::Family::constant;
    else if (fam == "even_cosine")
        spec.family = PrescribedSpec::Family::even_cosine;
    else if (fam == "even_legendre")
        spec.family = PrescribedSpec::Family::even_legendre;
    else if (fam == "gaussian_pair")
        spec.family = PrescribedSpec::Family::gaussian_pair;
    else
        throw ScenarioError(path + ".family", "unknown family '" + fam + "'");
    spec.c0 = number(j, "c0", path, 1.0, true);
    if (j.contains("coeffs")) {
        for (const auto& c : j.at("coeffs")) spec.coeffs.push_back(c.get<double>());
    }
    spec.amplitude = number(j, "amplitude", path, 0.0);
    spec.center = number(j, "center", path, 0.0);
    spec.width = number(j, "width", path, 0.3);
    return spec;
}

InitialShape parse_initial(const json& j, const std::string& path) {
    InitialShape shape;
    const std::string kind = require(j, "shape", path).get<std::string>();
    if (kind == "geodesic_sphere")
        shape.kind = InitialShape::Kind::geodesic_sphere;
    else if (kind == "perturbed_sphere")
        shape.kind = InitialShape::Kind::perturbed_sphere;
    else if (kind == "klein_ellipse")
        shape.kind = InitialShape::Kind::klein_ellipse;
    else
        throw ScenarioError(path + ".shape", "unknown shape '" + kind + "'");
    shape.rho0 = number(j, "rho0", path, 1.0);
    shape.eps = number(j, "eps", path, 0.0);
    shape.mode_k = static_cast<int>(number(j, "mode_k", path, 2));
    shape.e1 = number(j, "e1", path, 0.5);
    shape.e2 = number(j, "e2", path, 0.3);
    return shape;
}

const std::set<std::string> kChecks = {
    "q_monotone",     "j_monotone", "conserved_drift", "residual_target",
    "corridor",       "evenness",   "uniqueness_pair"};

const std::set<std::string> kVerdicts = {"converged", "timeout", "shrinking",
                                         "failure"};

} // namespace

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ScenarioError("$", std::string("invalid JSON: ") + e.what());
    }
    if (!j.contains("schema") || j.at("schema") != "gcflow/1")
        throw ScenarioError("schema", "expected \"gcflow/1\"");

    Scenario s;
    s.name = require(j, "name", "$").get<std::string>();
    if (j.contains("kind")) s.kind = j.at("kind").get<std::string>();
    if (s.kind != "flow" && s.kind != "ellipsoid_j")
        throw ScenarioError("kind", "unknown kind '" + s.kind + "'");
    if (j.contains("expected_verdict")) {
        s.expected_verdict = j.at("expected_verdict").get<std::string>();
        if (!kVerdicts.count(s.expected_verdict))
            throw ScenarioError("expected_verdict",
                                "unknown verdict '" + s.expected_verdict + "'");
    }
    if (j.contains("exploratory")) s.exploratory = j.at("exploratory").get<bool>();
    if (j.contains("reference_rho0"))
        s.reference_rho0 = j.at("reference_rho0").get<double>();

    if (j.contains("asserts")) {
        for (const auto& a : j.at("asserts")) {
            AssertSpec spec;
            spec.check = require(a, "check", "asserts[]").get<std::string>();
            if (!kChecks.count(spec.check))
                throw ScenarioError("asserts[].check",
                                    "unknown check '" + spec.check + "'");
            spec.tol = number(a, "tol", "asserts[]", 0.0, true);
            s.asserts.push_back(spec);
        }
    }

    if (s.kind == "ellipsoid_j") {
        const json& e = require(j, "ellipsoid", "$");
        s.e1 = number(e, "e1", "ellipsoid", 0.9, true);
        s.e2 = number(e, "e2", "ellipsoid", 0.5, true);
        s.ell_n = static_cast<int>(number(e, "n", "ellipsoid", 2));
        s.ell_a = number(e, "a", "ellipsoid", 0.5 * s.e2);
        if (!(s.e2 > 0 && s.e2 <= s.e1 && s.e1 < 1))
            throw ScenarioError("ellipsoid", "need 0 < e2 <= e1 < 1");
        return s;
    }

    const json& p = require(j, "problem", "$");
    FlowProblem& fp = s.problem;
    fp.n = static_cast<int>(number(p, "n", "problem", 1, true));
    fp.alpha = number(p, "alpha", "problem", 2.0, true);
    const std::string mode = require(p, "mode", "problem").get<std::string>();
    if (mode == "unnormalized")
        fp.mode = FlowMode::unnormalized;
    else if (mode == "normalized")
        fp.mode = FlowMode::normalized;
    else
        throw ScenarioError("problem.mode", "unknown mode '" + mode + "'");

    const int N = static_cast<int>(
        number(require(p, "grid", "problem"), "N", "problem.grid", 0, true));
    try {
        fp.grid = make_grid(fp.n, N);
    } catch (const std::invalid_argument& e) {
        throw ScenarioError("problem.grid", e.what());
    }

    try {
        fp.fdata =
            sample_prescribed(parse_f_tilde(require(p, "f_tilde", "problem"),
                                            "problem.f_tilde"),
                              *fp.grid);
    } catch (const PositivityError& e) {
        throw ScenarioError("problem.f_tilde", e.what());
    }

    fp.initial = parse_initial(require(p, "initial", "problem"), "problem.initial");
    if (j.contains("initial_b"))
        s.initial_b = parse_initial(j.at("initial_b"), "initial_b");

    if (p.contains("controls")) {
        const json& c = p.at("controls");
        fp.controls.cfl = number(c, "cfl", "problem.controls", 0.2);
        fp.controls.tol_rel = number(c, "tol_rel", "problem.controls", 1e-8);
        fp.controls.t_max = number(c, "t_max", "problem.controls", 50.0);
        fp.controls.max_halvings = static_cast<int>(
            number(c, "max_halvings", "problem.controls", 30));
        fp.controls.trace_stride = static_cast<int>(
            number(c, "trace_stride", "problem.controls", 25));
        if (!(fp.controls.cfl > 0.0 && fp.controls.cfl <= 1.0))
            throw ScenarioError("problem.controls.cfl", "need cfl in (0, 1]");
        if (!(fp.controls.tol_rel > 0.0))
            throw ScenarioError("problem.controls.tol_rel", "must be positive");
    }

    if (fp.mode == FlowMode::normalized && !s.exploratory) {
        if (!(fp.alpha > 2.0 && fp.alpha <= fp.n + 1.0 + 1e-12))
            throw ScenarioError(
                "problem.alpha",
                "normalized mode requires 2 < alpha <= n+1 "
                "(set \"exploratory\": true to run outside the regime)");
        if (!fp.fdata.even)
            throw ScenarioError("problem.f_tilde",
                                "normalized mode requires even data");
    }
    for (const AssertSpec& a : s.asserts)
        if (a.check == "uniqueness_pair" && !s.initial_b)
            throw ScenarioError("asserts[]",
                                "uniqueness_pair needs an initial_b shape");
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("$", "cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return parse_scenario(text);
}

namespace {

bool rho_max_strictly_decreasing(const std::vector<TraceRow>& trace) {
    for (std::size_t k = 1; k < trace.size(); ++k)
        if (!(trace[k].rho_max < trace[k - 1].rho_max)) return false;
    return trace.size() >= 2;
}

bool verdict_matches(const std::string& expected, const FlowResult& r) {
    if (expected == "converged") return r.verdict == Verdict::converged;
    if (expected == "timeout") return r.verdict == Verdict::timeout;
    if (expected == "shrinking")
        return r.verdict == Verdict::timeout &&
               rho_max_strictly_decreasing(r.trace);
    return r.verdict != Verdict::converged && r.verdict != Verdict::timeout;
}

AssertResult check_monotone(const std::vector<TraceRow>& trace, double tol,
                            bool increasing, bool use_q) {
    AssertResult res;
    res.check = use_q ? "q_monotone" : "j_monotone";
    res.tol = tol;
    res.pass = true;
    double worst = 0.0;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (const TraceRow& row : trace) {
        const double v = use_q ? row.Q : row.J;
        if (!std::isfinite(v)) continue;
        if (std::isfinite(prev)) {
            const double slack = tol * (1.0 + std::abs(prev));
            const double violation = increasing ? prev - v : v - prev;
            worst = std::max(worst, violation);
            if (violation > slack) res.pass = false;
        }
        prev = v;
    }
    res.value = worst;
    return res;
}

AssertResult check_conserved(const std::vector<TraceRow>& trace, double tol) {
    AssertResult res;
    res.check = "conserved_drift";
    res.tol = tol;
    const double c0 = trace.front().conserved;
    double drift = 0.0;
    for (const TraceRow& row : trace)
        drift = std::max(drift, std::abs(row.conserved - c0));
    res.value = drift / std::max(std::abs(c0), 1e-30);
    res.pass = res.value <= tol;
    return res;
}

AssertResult check_residual(const FlowResult& r, double tol) {
    AssertResult res;
    res.check = "residual_target";
    res.tol = tol;
    res.value = r.trace.back().residual_linf;
    res.pass = r.verdict == Verdict::converged && res.value <= tol;
    return res;
}

AssertResult check_evenness(const FlowResult& r, double tol) {
    AssertResult res;
    res.check = "evenness";
    res.tol = tol;
    const double eps = std::numeric_limits<double>::epsilon();
    const double d0 = r.trace.front().evenness_defect;
    res.pass = true;
    for (const TraceRow& row : r.trace) {
        const double allow = d0 + tol * eps * std::max<long>(row.step, 1);
        res.value = std::max(res.value, row.evenness_defect - allow);
        if (row.evenness_defect > allow) res.pass = false;
    }
    return res;
}

AssertResult check_corridor(const FlowProblem& p, const FlowResult& r,
                            double tol) {
    AssertResult res;
    res.check = "corridor";
    res.tol = tol;
    res.pass = true;
    double worst = 0.0;
    auto fail_by = [&](double violation) {
        worst = std::max(worst, violation);
        if (violation > 0.0) res.pass = false;
    };

    // the radial corridor argument needs alpha > n+1, or alpha = n+1 with
    // f < 1; the even regime bounds rho differently
    const bool c0_applies = p.mode == FlowMode::unnormalized &&
                            (r.regime == Regime::expanding ||
                             r.regime == Regime::alexandrov);
    const double f_min = p.fdata.f.minCoeff();
    const double f_max = p.fdata.f.maxCoeff();
    const double rho_max0 = r.trace.front().rho_max;
    const double rho_min0 = r.trace.front().rho_min;
    const double upper =
        std::max(rho_max0, c0_upper_radius(p.alpha, f_min)) + 10.0 * tol;
    const double lower =
        std::min(rho_min0, c0_lower_radius(p.alpha, p.n, f_max)) - 10.0 * tol;

    const long total = r.trace.back().step;
    double theta_lo = std::numeric_limits<double>::infinity();
    double theta_hi = 0.0;
    for (const TraceRow& row : r.trace) {
        fail_by(-row.u_min);  // star-shaped at every step
        fail_by(row.grad_max - gradient_bound(row.rho_min, row.rho_max));
        if (c0_applies) {
            fail_by(row.rho_max - upper);
            fail_by(lower - row.rho_min);
        }
        if (row.step > total / 100) {
            theta_lo = std::min(theta_lo, row.theta_min);
            theta_hi = std::max(theta_hi, row.theta_max);
        }
    }
    if (theta_hi > 0.0) {
        fail_by(-theta_lo);
        if (theta_lo > 0.0) fail_by(theta_hi / theta_lo - 100.0);
    }
    res.value = worst;
    return res;
}

void write_flow_outputs(const fs::path& dir, const FlowProblem& p,
                        const FlowResult& r, const std::string& suffix) {
    write_trace_csv((dir / ("trace" + suffix + ".csv")).string(), r.trace);
    const GeometryFields fields = geometry_fields(r.final_state);
    const KleinState ks = klein_project(r.final_state, fields);
    const ResidualReport res =
        residual(*p.grid, fields, p.fdata.f_tilde, p.alpha,
                 p.mode == FlowMode::normalized);
    write_profile_csv((dir / ("profile_final" + suffix + ".csv")).string(),
                      *p.grid, r.final_state, fields, ks, p.fdata.f_tilde,
                      res.pointwise);
}

} // namespace

ScenarioOutcome run_scenario(const Scenario& s, const std::string& out_dir,
                             bool quiet) {
    ScenarioOutcome outcome;
    outcome.name = s.name;
    const fs::path dir = fs::path(out_dir) / s.name;
    fs::create_directories(dir);

    SummaryWriter summary;
    summary.add("schema", std::string("gcflow-summary/1"));
    summary.add("name", s.name);
    summary.add("kind", s.kind);

    if (s.kind == "ellipsoid_j") {
        outcome.j_value = ellipsoid_j(s.e1, s.e2, s.ell_n, s.ell_a, 1e-12);
        outcome.uhat_max = s.e1;
        outcome.pass = std::isfinite(outcome.j_value);
        outcome.verdict = outcome.pass ? "converged" : "failure";
        summary.add("e1", s.e1);
        summary.add("e2", s.e2);
        summary.add("a", s.ell_a);
        summary.add("j_value", outcome.j_value);
        summary.add("uhat_max", outcome.uhat_max);
        summary.add("pass", outcome.pass);
        summary.write((dir / "summary.json").string());
        if (!quiet)
            std::printf("%s: J = %s (uhat_max = %s)\n", s.name.c_str(),
                        fmt17(outcome.j_value).c_str(),
                        fmt17(outcome.uhat_max).c_str());
        return outcome;
    }

    FlowResult r = run_flow(s.problem);
    if (r.trace.empty()) r.trace.push_back(TraceRow{});  // invalid_initial
    outcome.verdict = to_string(r.verdict);
    outcome.regime = to_string(r.regime);
    bool pass = verdict_matches(s.expected_verdict, r);

    std::optional<FlowResult> rb;
    if (s.initial_b) {
        FlowProblem pb = s.problem;
        pb.initial = *s.initial_b;
        rb = run_flow(pb);
        if (!verdict_matches(s.expected_verdict, *rb)) pass = false;
        write_flow_outputs(dir, pb, *rb, "_b");
    }

    for (const AssertSpec& a : s.asserts) {
        AssertResult res;
        if (a.check == "q_monotone")
            res = check_monotone(r.trace, a.tol, true, true);
        else if (a.check == "j_monotone")
            res = check_monotone(r.trace, a.tol, false, false);
        else if (a.check == "conserved_drift")
            res = check_conserved(r.trace, a.tol);
        else if (a.check == "residual_target")
            res = check_residual(r, a.tol);
        else if (a.check == "corridor")
            res = check_corridor(s.problem, r, a.tol);
        else if (a.check == "evenness")
            res = check_evenness(r, a.tol);
        else {  // uniqueness_pair
            res.check = a.check;
            res.tol = a.tol;
            res.value = uniqueness_distance(r.final_state, rb->final_state);
            res.pass = res.value <= a.tol;
        }
        if (!res.pass) pass = false;
        outcome.asserts.push_back(res);
    }

    if (s.reference_rho0) {
        outcome.reference_error =
            (r.final_state.rho - *s.reference_rho0).abs().maxCoeff();
    }

    write_flow_outputs(dir, s.problem, r, "");

    summary.add("verdict", outcome.verdict);
    summary.add("expected_verdict", s.expected_verdict);
    summary.add("regime", outcome.regime);
    summary.add("reason", r.reason);
    summary.add("n", static_cast<long>(s.problem.n));
    summary.add("alpha", s.problem.alpha);
    summary.add("mode", std::string(s.problem.mode == FlowMode::normalized
                                        ? "normalized"
                                        : "unnormalized"));
    summary.add("N", static_cast<long>(s.problem.grid->N));
    summary.add("steps", r.steps);
    summary.add("wall_time_s", r.wall_time_s);
    summary.add("t_final", r.final_state.t);
    summary.add("final_residual_linf", r.trace.back().residual_linf);
    summary.add("final_residual_l2", r.trace.back().residual_l2);
    summary.add("c_star", r.c_star);
    summary.add("eta_final", r.eta_final);
    summary.add("rho_min", r.final_state.rho.minCoeff());
    summary.add("rho_max", r.final_state.rho.maxCoeff());
    if (s.reference_rho0) summary.add("reference_error_linf", outcome.reference_error);
    if (rb) {
        const double d = uniqueness_distance(r.final_state, rb->final_state);
        summary.add("uniqueness_distance", d);
    }
    for (const AssertResult& a : outcome.asserts) {
        summary.add("assert_" + a.check + "_pass", a.pass);
        summary.add("assert_" + a.check + "_value", a.value);
    }
    summary.add("pass", pass);
    summary.write((dir / "summary.json").string());

    if (!quiet) {
        std::printf("%s: verdict=%s regime=%s steps=%ld residual=%s %s\n",
                    s.name.c_str(), outcome.verdict.c_str(),
                    outcome.regime.c_str(), r.steps,
                    fmt17(r.trace.back().residual_linf).c_str(),
                    pass ? "PASS" : "FAIL");
        for (const AssertResult& a : outcome.asserts)
            std::printf("  assert %-16s %s (value=%s tol=%s)\n",
                        a.check.c_str(), a.pass ? "ok" : "FAILED",
                        fmt17(a.value).c_str(), fmt17(a.tol).c_str());
    }

    outcome.pass = pass;
    outcome.result = std::move(r);
    outcome.result_b = std::move(rb);
    return outcome;
}

namespace {

Scenario apply_param(const Scenario& base, const std::string& param,
                     double value) {
    Scenario s = base;
    char tag[64];
    std::snprintf(tag, sizeof(tag), "_%s_%g", param.c_str(), value);
    s.name += tag;
    if (param == "e1") {
        if (s.kind != "ellipsoid_j")
            throw ScenarioError("sweep", "e1 only applies to ellipsoid_j");
        s.e1 = value;
        return s;
    }
    if (s.kind != "flow") throw ScenarioError("sweep", "flow scenario required");
    if (param == "alpha") {
        s.problem.alpha = value;
    } else if (param == "N") {
        s.problem.grid = make_grid(s.problem.n, static_cast<int>(value));
        s.problem.fdata =
            sample_prescribed(s.problem.fdata.spec, *s.problem.grid);
    } else if (param == "cfl") {
        s.problem.controls.cfl = value;
    } else if (param == "f-amplitude") {
        PrescribedSpec spec = s.problem.fdata.spec;
        if (spec.family == PrescribedSpec::Family::gaussian_pair)
            spec.amplitude = value;
        else if (!spec.coeffs.empty())
            spec.coeffs[0] = value;
        else
            throw ScenarioError("sweep", "f-amplitude needs a non-constant family");
        s.problem.fdata = sample_prescribed(spec, *s.problem.grid);
    } else {
        throw ScenarioError("sweep", "unknown parameter '" + param + "'");
    }
    return s;
}

} // namespace

int run_sweep(const Scenario& base, const std::string& param,
              const std::vector<double>& values, const std::string& out_dir,
              bool quiet) {
    fs::create_directories(out_dir);
    std::ofstream agg(fs::path(out_dir) /
                      (base.name + "_sweep_" + param + ".csv"));
    agg << "param,value,name,verdict,pass,steps,wall_time_s,final_residual_linf,"
           "c_star,rho_min,rho_max,q_final,j_final,conserved_drift,"
           "ref_error_linf,j_ellipsoid,uhat_max\n";
    int failures = 0;
    for (double v : values) {
        std::string verdict = "error";
        ScenarioOutcome o;
        try {
            const Scenario s = apply_param(base, param, v);
            o = run_scenario(s, out_dir, quiet);
            verdict = o.verdict;
            if (!o.pass) ++failures;
        } catch (const std::exception& e) {
            ++failures;
            if (!quiet)
                std::fprintf(stderr, "sweep instance %g failed: %s\n", v, e.what());
            o.pass = false;
        }
        const bool flow = !o.result.trace.empty();
        const TraceRow last = flow ? o.result.trace.back() : TraceRow{};
        const double c0 = flow ? o.result.trace.front().conserved : 0.0;
        double drift = 0.0;
        for (const TraceRow& row : o.result.trace)
            drift = std::max(drift,
                             std::abs(row.conserved - c0) /
                                 std::max(std::abs(c0), 1e-30));
        agg << param << ',' << fmt17(v) << ',' << o.name << ',' << verdict
            << ',' << (o.pass ? 1 : 0) << ',' << o.result.steps << ','
            << fmt17(o.result.wall_time_s) << ',' << fmt17(last.residual_linf)
            << ',' << fmt17(last.c_star) << ',' << fmt17(last.rho_min) << ','
            << fmt17(last.rho_max) << ',' << fmt17(last.Q) << ','
            << fmt17(last.J) << ',' << fmt17(drift) << ','
            << fmt17(o.reference_error) << ',' << fmt17(o.j_value) << ','
            << fmt17(o.uhat_max) << "\n";
    }
    return failures;
}

int run_suite(const std::string& suite_path, const std::string& out_dir,
              bool quiet) {
    std::ifstream in(suite_path);
    if (!in) throw ScenarioError("$", "cannot open " + suite_path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ScenarioError("$", std::string("invalid JSON: ") + e.what());
    }
    if (!j.contains("schema") || j.at("schema") != "gcflow-suite/1")
        throw ScenarioError("schema", "expected \"gcflow-suite/1\"");

    const fs::path base = fs::path(suite_path).parent_path();
    int failures = 0;
    std::set<std::string> seen;
    for (const auto& entry : require(j, "scenarios", "$")) {
        const fs::path p = base / entry.get<std::string>();
        bool ok = false;
        std::string detail;
        try {
            const Scenario s = load_scenario(p.string());
            if (!seen.insert(s.name).second)
                throw ScenarioError("name", "duplicate scenario name '" + s.name +
                                                "' in suite");
            const ScenarioOutcome o = run_scenario(s, out_dir, quiet);
            ok = o.pass;
            detail = o.verdict;
        } catch (const std::exception& e) {
            detail = e.what();
        }
        std::printf("[%s] %s (%s)\n", ok ? "PASS" : "FAIL",
                    p.filename().string().c_str(), detail.c_str());
        if (!ok) ++failures;
    }
    return failures;
}

} // namespace gcflow
