#include "gcflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gcflow {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

const char* kTraceHeader =
    "t,dt,rho_min,rho_max,grad_max,kappa_min,kappa_max,u_min,theta_min,"
    "theta_max,residual_linf,residual_l2,Q,J,conserved,eta,c_star,"
    "evenness_defect";

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

} // namespace

void write_trace_csv(const std::string& path,
                     const std::vector<TraceRow>& trace) {
    std::ofstream out = open_out(path);
    out << kTraceHeader << "\n";
    for (const TraceRow& r : trace) {
        const double cols[] = {r.t,         r.dt,           r.rho_min,
                               r.rho_max,   r.grad_max,     r.kappa_min,
                               r.kappa_max, r.u_min,        r.theta_min,
                               r.theta_max, r.residual_linf, r.residual_l2,
                               r.Q,         r.J,            r.conserved,
                               r.eta,       r.c_star,       r.evenness_defect};
        for (std::size_t i = 0; i < std::size(cols); ++i)
            out << (i ? "," : "") << fmt17(cols[i]);
        out << "\n";
    }
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader)
        throw std::runtime_error("unexpected trace header in " + path);
    std::vector<TraceRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        double cols[18];
        for (double& c : cols) {
            if (!std::getline(ss, cell, ','))
                throw std::runtime_error("short trace row in " + path);
            c = std::strtod(cell.c_str(), nullptr);
        }
        TraceRow r;
        r.t = cols[0];
        r.dt = cols[1];
        r.rho_min = cols[2];
        r.rho_max = cols[3];
        r.grad_max = cols[4];
        r.kappa_min = cols[5];
        r.kappa_max = cols[6];
        r.u_min = cols[7];
        r.theta_min = cols[8];
        r.theta_max = cols[9];
        r.residual_linf = cols[10];
        r.residual_l2 = cols[11];
        r.Q = cols[12];
        r.J = cols[13];
        r.conserved = cols[14];
        r.eta = cols[15];
        r.c_star = cols[16];
        r.evenness_defect = cols[17];
        rows.push_back(r);
    }
    return rows;
}

void write_profile_csv(const std::string& path, const SphereGrid& grid,
                       const RadialState& state, const GeometryFields& fields,
                       const KleinState& kstate, const ArrayXd& f_tilde,
                       const ArrayXd& residual_pointwise) {
    std::ofstream out = open_out(path);
    out << "theta,rho,r,u,uhat,K,Khat,kappa_1";
    if (grid.n == 2) out << ",kappa_2";
    out << ",f_tilde,residual\n";
    for (int j = 0; j < grid.N; ++j) {
        out << fmt17(grid.theta[j]) << ',' << fmt17(state.rho[j]) << ','
            << fmt17(kstate.r[j]) << ',' << fmt17(fields.u[j]) << ','
            << fmt17(kstate.uhat[j]) << ',' << fmt17(fields.K[j]) << ','
            << fmt17(kstate.khat[j]) << ',' << fmt17(fields.kappa_min[j]);
        if (grid.n == 2) out << ',' << fmt17(fields.kappa_max[j]);
        out << ',' << fmt17(f_tilde[j]) << ',' << fmt17(residual_pointwise[j])
            << "\n";
    }
}

void SummaryWriter::add(const std::string& key, double v) {
    entries_.emplace_back(key, std::isfinite(v) ? fmt17(v) : "null");
}

void SummaryWriter::add(const std::string& key, long v) {
    entries_.emplace_back(key, std::to_string(v));
}

void SummaryWriter::add(const std::string& key, const std::string& v) {
    entries_.emplace_back(key, "\"" + v + "\"");
}

void SummaryWriter::add(const std::string& key, bool v) {
    entries_.emplace_back(key, v ? "true" : "false");
}

std::string SummaryWriter::str() const {
    std::string s = "{\n";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        s += "  \"" + entries_[i].first + "\": " + entries_[i].second;
        if (i + 1 < entries_.size()) s += ",";
        s += "\n";
    }
    s += "}\n";
    return s;
}

void SummaryWriter::write(const std::string& path) const {
    open_out(path) << str();
}

} // namespace gcflow
