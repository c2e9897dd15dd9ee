#pragma once

#include <string>
#include <vector>

#include "gcflow/flow.hpp"

namespace gcflow {

//! 17 significant digits: lossless double round-trip.
std::string fmt17(double v);

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace);

std::vector<TraceRow> read_trace_csv(const std::string& path);

//! Final radial profile with the Klein-side and curvature columns.
void write_profile_csv(const std::string& path, const SphereGrid& grid,
                       const RadialState& state, const GeometryFields& fields,
                       const KleinState& kstate, const ArrayXd& f_tilde,
                       const ArrayXd& residual_pointwise);

//! Flat key/value report; values are written with fmt17.
struct SummaryWriter {
    void add(const std::string& key, double v);
    void add(const std::string& key, long v);
    void add(const std::string& key, const std::string& v);
    void add(const std::string& key, bool v);
    void write(const std::string& path) const;
    std::string str() const;

  private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

} // namespace gcflow
