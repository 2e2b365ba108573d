#include "qudit_wells/serialization.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qw {

namespace {

const Json& require_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <typename T>
T field_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("field '") + key + "': " + e.what());
  }
}

Json complex_pair(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument("complex entries must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json real_vector(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_pair(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw std::invalid_argument("matrix must be square");
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = complex_from_json(row[c]);
  }
  if (!is_finite(m)) throw std::invalid_argument("matrix entries must be finite");
  return m;
}

Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_pair(v(i)));
  return out;
}

ComplexVector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("vector must be a non-empty array");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

Json to_json(const HamiltonianSpec& s) {
  Json j;
  j["topology"] = to_string(s.topology);
  j["nu"] = s.nu;
  j["delta_eps"] = s.delta_eps;
  j["d"] = s.d;
  if (s.custom_matrix) j["custom_matrix"] = matrix_to_json(*s.custom_matrix);
  return j;
}

HamiltonianSpec hamiltonian_spec_from_json(const Json& j) {
  HamiltonianSpec s;
  s.topology = topology_from_string(require_field(j, "topology").get<std::string>());
  s.nu = field_or(j, "nu", s.nu);
  s.delta_eps = field_or(j, "delta_eps", s.delta_eps);
  if (s.topology == Topology::PeriodicTriple) s.d = 3;
  s.d = field_or(j, "d", s.d);
  if (j.contains("custom_matrix")) s.custom_matrix = matrix_from_json(j.at("custom_matrix"));
  s.validate();
  return s;
}

Json to_json(const PerturbationSpec& s) {
  Json j;
  j["kind"] = to_string(s.kind);
  j["epsilon"] = s.epsilon;
  if (s.kind == PerturbationKind::DiagonalTilt) j["tilt"] = s.tilt;
  if (s.kind == PerturbationKind::GellMannCombination) j["coefficients"] = s.coefficients;
  return j;
}

PerturbationSpec perturbation_spec_from_json(const Json& j) {
  PerturbationSpec s;
  s.kind = perturbation_kind_from_string(require_field(j, "kind").get<std::string>());
  s.epsilon = field_or(j, "epsilon", s.epsilon);
  s.tilt = field_or(j, "tilt", s.tilt);
  s.coefficients = field_or(j, "coefficients", s.coefficients);
  return s;
}

Json to_json(const PiecewisePotential& p) {
  Json j;
  j["boundary"] = to_string(p.boundary);
  j["x_min"] = p.x_min;
  j["x_max"] = p.x_max;
  j["cells"] = p.cells;
  Json segs = Json::array();
  for (const auto& s : p.segments) segs.push_back({{"x_lo", s.x_lo}, {"x_hi", s.x_hi}, {"value", s.value}});
  j["segments"] = std::move(segs);
  j["well_width"] = p.well_width;
  j["barrier_width"] = p.barrier_width;
  j["barrier_height"] = p.barrier_height;
  return j;
}

PiecewisePotential potential_from_json(const Json& j) {
  PiecewisePotential p;
  p.boundary = boundary_from_string(require_field(j, "boundary").get<std::string>());
  p.x_min = require_field(j, "x_min").get<double>();
  p.x_max = require_field(j, "x_max").get<double>();
  p.cells = field_or(j, "cells", 1);
  for (const Json& s : require_field(j, "segments"))
    p.segments.push_back({require_field(s, "x_lo").get<double>(), require_field(s, "x_hi").get<double>(),
                          require_field(s, "value").get<double>()});
  p.well_width = field_or(j, "well_width", 0.0);
  p.barrier_width = field_or(j, "barrier_width", 0.0);
  p.barrier_height = field_or(j, "barrier_height", 0.0);
  p.validate();
  return p;
}

Json to_json(const PulseSchedule& s) {
  Json events = Json::array();
  for (const auto& e : s.events) events.push_back({{"time", e.time}, {"channel", to_string(e.channel)}, {"area", e.area}});
  return {{"events", std::move(events)}, {"total_duration", s.total_duration}};
}

PulseSchedule pulse_schedule_from_json(const Json& j) {
  PulseSchedule s;
  for (const Json& e : require_field(j, "events"))
    s.events.push_back({require_field(e, "time").get<double>(),
                        flux_channel_from_string(require_field(e, "channel").get<std::string>()),
                        field_or(e, "area", 1.0)});
  s.total_duration = require_field(j, "total_duration").get<double>();
  s.validate();
  return s;
}

Json to_json(const GateReport& r) {
  Json params = Json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  return {{"target", matrix_to_json(r.target)},
          {"achieved", matrix_to_json(r.achieved)},
          {"phase_distance", r.phase_distance},
          {"parameters", std::move(params)}};
}

GateReport gate_report_from_json(const Json& j) {
  GateReport r;
  r.target = matrix_from_json(require_field(j, "target"));
  r.achieved = matrix_from_json(require_field(j, "achieved"));
  r.phase_distance = require_field(j, "phase_distance").get<double>();
  for (const auto& [k, v] : require_field(j, "parameters").items()) r.parameters[k] = v.get<double>();
  return r;
}

Json to_json(const AxisAngle& a) {
  return {{"axis", {a.axis.x(), a.axis.y(), a.axis.z()}}, {"angle", a.angle}, {"theta", a.theta()}, {"psi", a.psi()}};
}

Json to_json(const Spectrum& s) {
  return {{"eigenvalues", real_vector(s.eigenvalues)},
          {"eigenvectors", matrix_to_json(s.eigenvectors)},
          {"degeneracy_groups", s.degeneracy_groups},
          {"group_tol", s.group_tol}};
}

Json to_json(const RevivalReport& r) {
  return {{"found", r.found},
          {"period", r.period},
          {"fidelity_at_period", r.fidelity_at_period},
          {"phase_distance", r.phase_distance},
          {"search_bound", r.search_bound},
          {"base_gap", r.base_gap},
          {"harmonic_lcm", r.harmonic_lcm}};
}

Json to_json(const GridSolution& s) {
  Json vecs = Json::array();
  for (Eigen::Index c = 0; c < s.eigenvectors.cols(); ++c) vecs.push_back(real_vector(s.eigenvectors.col(c)));
  return {{"boundary", to_string(s.boundary)},
          {"n_points", s.n_points},
          {"spacing", s.spacing},
          {"x_min", s.x_min},
          {"x_max", s.x_max},
          {"eigenvalues", real_vector(s.eigenvalues)},
          {"eigenvectors", std::move(vecs)}};
}

Json to_json(const WkbResult& r) {
  return {{"nu", r.nu},
          {"barrier_integral", r.barrier_integral},
          {"attempt_frequency", r.attempt_frequency},
          {"formula", to_string(r.formula)},
          {"energy", r.energy}};
}

Json to_json(const ReductionReport& r) {
  return {{"d", r.d},
          {"in_band_spread", r.in_band_spread},
          {"band_gap", r.band_gap},
          {"ratio", r.ratio},
          {"threshold", r.threshold},
          {"pass", r.pass}};
}

Json to_json(const BandFit& f) {
  return {{"d", f.d},
          {"nu_eff", f.nu_eff},
          {"offset", f.offset},
          {"bandwidth", f.bandwidth},
          {"max_residual", f.max_residual},
          {"relative_residual", f.relative_residual}};
}

Json to_json(const AsymmetricReport& r) {
  return {{"nu", r.nu},
          {"nu_left", r.nu_left},
          {"nu_right", r.nu_right},
          {"eps_left", r.eps_left},
          {"eps_right", r.eps_right},
          {"delta_eps", r.delta_eps},
          {"amplitude_factor", r.amplitude_factor},
          {"one_well_gap", r.one_well_gap},
          {"barrier_center", r.barrier_center},
          {"barrier_value", r.barrier_value}};
}

Json to_json(const TransferReport& r) {
  return {{"nu_eff", r.nu_eff},
          {"predicted", r.predicted},
          {"measured", r.measured},
          {"peak_population", r.peak_population},
          {"steps", r.steps}};
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string grid_solution_csv(const GridSolution& s) {
  std::ostringstream out;
  out << "x,V";
  for (int j = 0; j < s.levels(); ++j) out << ",psi_" << j;
  out << '\n';
  for (int i = 0; i < s.n_points; ++i) {
    out << format_number(s.x(i)) << ',' << format_number(s.potential(i));
    for (int j = 0; j < s.levels(); ++j) out << ',' << format_number(s.eigenvectors(i, j));
    out << '\n';
  }
  return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move output into place at '" + path + "': " + ec.message());
  }
}

}  // namespace qw
