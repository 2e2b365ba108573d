#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "qudit_wells/random_unitary.hpp"

namespace qw::cli {

using std::numbers::pi;

namespace {

const std::vector<std::string> kCommands{"spectrum", "evolve", "revival", "synth", "pulse-plan", "oracle", "validate"};

template <typename T>
T param(const Json& p, const char* key, T fallback) {
  if (!p.contains(key)) return fallback;
  try {
    return p.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("parameter '") + key + "': " + e.what());
  }
}

std::string artifact_json(const RunConfig& cfg, Json result) {
  Json root;
  root["config"] = cfg.to_json();
  root["result"] = std::move(result);
  return root.dump(2) + "\n";
}

std::string csv_header(const RunConfig& cfg) { return "# config: " + cfg.to_json().dump() + "\n"; }

Json real_array(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

HamiltonianSpec hamiltonian_from(const Json& p) {
  if (!p.contains("topology")) throw std::invalid_argument("missing parameter 'topology'");
  Json h = Json::object();
  for (const char* key : {"topology", "nu", "delta_eps", "d", "custom_matrix"})
    if (p.contains(key)) h[key] = p.at(key);
  return hamiltonian_spec_from_json(h);
}

std::optional<PerturbationSpec> perturbation_from(const Json& p) {
  if (!p.contains("perturbation")) return std::nullopt;
  const Json& v = p.at("perturbation");
  if (v.is_object()) return perturbation_spec_from_json(v);
  Json spec = Json::object();
  spec["kind"] = v;
  for (const char* key : {"epsilon", "tilt", "coefficients"})
    if (p.contains(key)) spec[key] = p.at(key);
  return perturbation_spec_from_json(spec);
}

ComplexMatrix total_hamiltonian(const HamiltonianSpec& spec, const std::optional<PerturbationSpec>& pert) {
  ComplexMatrix h = build_hamiltonian(spec);
  if (pert) h += build_perturbation(*pert, spec.dimension());
  return h;
}

Json hamiltonian_record(const HamiltonianSpec& spec, const std::optional<PerturbationSpec>& pert) {
  Json j;
  j["hamiltonian"] = to_json(spec);
  j["perturbation"] = pert ? to_json(*pert) : Json(nullptr);
  return j;
}

// ---- spectrum ----

CommandResult cmd_spectrum(const RunConfig& cfg) {
  const HamiltonianSpec spec = hamiltonian_from(cfg.params);
  const auto pert = perturbation_from(cfg.params);
  const Spectrum s = hermitian_eig(total_hamiltonian(spec, pert));
  Json r = hamiltonian_record(spec, pert);
  r["spectrum"] = to_json(s);
  CommandResult out;
  if (spec.topology != Topology::Custom && !pert) {
    const std::vector<double> analytic = analytic_spectrum(spec);
    double residual = 0.0;
    for (int i = 0; i < s.dim(); ++i) residual = std::max(residual, std::abs(s.eigenvalues(i) - analytic[i]));
    r["analytic"] = analytic;
    r["residual"] = residual;
    r["pass"] = residual <= 1e-9;
    if (residual > 1e-9) out.exit_code = kExitValidation;
  } else {
    r["analytic"] = nullptr;
    r["residual"] = nullptr;
    r["pass"] = true;
  }
  out.artifact = artifact_json(cfg, std::move(r));
  return out;
}

// ---- evolve ----

QuantumState initial_state(const Json& p, int dim) {
  const std::string name = param<std::string>(p, "initial", "well-0");
  if (name.rfind("well-", 0) == 0) {
    int k = 0;
    try {
      k = std::stoi(name.substr(5));
    } catch (const std::exception&) {
      throw std::invalid_argument("initial state '" + name + "' has no well index");
    }
    return QuantumState::basis(dim, k);
  }
  if (name == "uniform") return QuantumState::uniform(dim);
  if (name == "current-plus" || name == "current-minus") {
    const Spectrum s = hermitian_eig(cyclic_current(dim));
    const int col = name == "current-plus" ? dim - 1 : 0;
    return QuantumState::from_amplitudes(s.eigenvectors.col(col), 1e-10);
  }
  if (name == "custom") {
    if (!p.contains("amplitudes")) throw std::invalid_argument("custom initial state needs 'amplitudes'");
    const ComplexVector a = vector_from_json(p.at("amplitudes"));
    if (a.size() != dim) throw std::invalid_argument("custom amplitudes have the wrong dimension");
    return QuantumState::from_amplitudes(a);
  }
  throw std::invalid_argument("unknown initial state '" + name + "'");
}

CommandResult cmd_evolve(const RunConfig& cfg) {
  const Json& p = cfg.params;
  const HamiltonianSpec spec = hamiltonian_from(p);
  const auto pert = perturbation_from(p);
  const int dim = spec.dimension();
  const QuantumState psi0 = initial_state(p, dim);
  const double hbar = param(p, "hbar", 1.0);
  const double t_max = param(p, "t_max", 2.0 * pi * hbar / spec.nu);
  const int steps = param(p, "steps", 200);
  if (!(t_max > 0.0) || !std::isfinite(t_max) || steps < 1)
    throw std::invalid_argument("time grid must have t_max > 0 and steps >= 1");
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");

  const Spectrum s = hermitian_eig(total_hamiltonian(spec, pert));
  const ComplexVector c0 = s.eigenvectors.adjoint() * psi0.amplitudes();
  std::vector<double> times(steps + 1);
  std::vector<ComplexVector> states(steps + 1);
  for (int k = 0; k <= steps; ++k) {
    times[k] = t_max * k / steps;
    ComplexVector c = c0;
    for (int i = 0; i < dim; ++i) c(i) *= std::exp(-kI * s.eigenvalues(i) * times[k] / hbar);
    states[k] = s.eigenvectors * c;
  }

  CommandResult out;
  if (cfg.output_format == "csv") {
    std::ostringstream csv;
    csv << csv_header(cfg) << "t";
    for (int i = 0; i < dim; ++i) csv << ",re_" << i << ",im_" << i;
    for (int i = 0; i < dim; ++i) csv << ",p_" << i;
    csv << '\n';
    for (int k = 0; k <= steps; ++k) {
      csv << format_number(times[k]);
      for (int i = 0; i < dim; ++i)
        csv << ',' << format_number(states[k](i).real()) << ',' << format_number(states[k](i).imag());
      for (int i = 0; i < dim; ++i) csv << ',' << format_number(std::norm(states[k](i)));
      csv << '\n';
    }
    out.artifact = csv.str();
  } else {
    Json r = hamiltonian_record(spec, pert);
    r["initial"] = vector_to_json(psi0.amplitudes());
    r["times"] = times;
    Json amps = Json::array(), pops = Json::array();
    for (const auto& v : states) {
      amps.push_back(vector_to_json(v));
      pops.push_back(real_array(v.cwiseAbs2()));
    }
    r["amplitudes"] = std::move(amps);
    r["populations"] = std::move(pops);
    out.artifact = artifact_json(cfg, std::move(r));
  }
  return out;
}

// ---- revival ----

CommandResult cmd_revival(const RunConfig& cfg) {
  const Json& p = cfg.params;
  const HamiltonianSpec spec = hamiltonian_from(p);
  const auto pert = perturbation_from(p);
  const double hbar = param(p, "hbar", 1.0);
  const double tol = param(p, "tol", 1e-9);
  const auto max_harmonic = param<long long>(p, "max_harmonic", 4096);
  const RevivalReport rep = revival_period(total_hamiltonian(spec, pert), hbar, tol, max_harmonic);
  Json r = hamiltonian_record(spec, pert);
  r["revival"] = to_json(rep);
  return {kExitOk, artifact_json(cfg, std::move(r))};
}

// ---- synth ----

ComplexMatrix named_target(const std::string& name) {
  ComplexMatrix m;
  if (name == "identity") return ComplexMatrix::Identity(2, 2);
  if (name == "hadamard") return hadamard();
  if (name == "not" || name == "x") return pauli(1);
  if (name == "y") return pauli(2);
  if (name == "z") return pauli(3);
  if (name == "s") return rz(0.5 * pi) * std::exp(0.25 * kI * pi);
  if (name == "t") return rz(0.25 * pi) * std::exp(0.125 * kI * pi);
  if (name == "qft3") return qft(3);
  if (name == "identity3") return ComplexMatrix::Identity(3, 3);
  const auto xs = ternary_x_gates();
  if (name == "x01") return xs[0];
  if (name == "x02") return xs[1];
  if (name == "x12") return xs[2];
  throw std::invalid_argument("unknown target gate '" + name + "'");
}

struct Step {
  bool z_axis;    // rotation about z (RF route) rather than a tilted XZ axis
  double theta;   // tilt from z for XZ steps
  double angle;
};

PulseSchedule steps_schedule(const std::vector<Step>& steps, double nu, double hbar, double rf_omega) {
  PulseSchedule total;
  for (const Step& s : steps) {
    if (std::abs(s.angle) < 1e-12) continue;
    const double sin_t = std::sin(s.theta);
    const double omega = (s.z_axis || sin_t < 1e-9) ? rf_omega : 2.0 * nu / (hbar * sin_t);
    const int n = std::max(1, static_cast<int>(std::ceil(40.0 * std::abs(s.angle) / pi - 1e-9)));
    const std::vector<double> w{omega};
    const PulseSchedule part = sfq_schedule(SfqKind::ResonantZ, w, n);
    for (const auto& e : part.events) total.events.push_back({e.time + total.total_duration, e.channel, e.area});
    total.total_duration += part.total_duration;
  }
  total.validate();
  return total;
}

CommandResult cmd_synth(const RunConfig& cfg) {
  const Json& p = cfg.params;
  const double nu = param(p, "nu", 1.0);
  const double hbar = param(p, "hbar", 1.0);
  const double rf_omega = param(p, "rf_omega", 2.0 * pi * 10.0);
  const bool want_schedule = param(p, "schedule", false);
  if (!(nu > 0.0) || !(hbar > 0.0) || !(rf_omega > 0.0)) throw std::invalid_argument("nu, hbar and rf_omega must be positive");

  std::string name = param<std::string>(p, "target", "");
  ComplexMatrix target;
  if (p.contains("target_matrix")) {
    target = matrix_from_json(p.at("target_matrix"));
    if (name.empty()) name = "matrix";
  } else {
    if (name.empty()) throw std::invalid_argument("missing parameter 'target'");
    target = named_target(name);
  }
  if (!is_unitary(target, 1e-10)) throw std::invalid_argument("target is not unitary");
  const std::string method = param<std::string>(p, "method", target.rows() == 2 ? "two-step" : "su3");

  Json r;
  r["target_name"] = name;
  r["method"] = method;
  GateReport report;
  std::optional<PulseSchedule> schedule;
  Json plan;
  if (method == "two-step") {
    if (target.rows() != 2) throw std::invalid_argument("two-step synthesis needs a 2x2 target");
    const TwoStepPlan tp = decompose_two_step(target);
    report = tp.report;
    if (want_schedule)
      schedule = steps_schedule({{false, tp.theta1, tp.phi1}, {false, tp.theta2, tp.phi2}}, nu, hbar, rf_omega);
  } else if (method == "five-step") {
    if (target.rows() != 2) throw std::invalid_argument("five-step synthesis needs a 2x2 target");
    const FiveStepPlan fp = euler_five_step(axis_angle_of(target));
    report = GateReport::compare(target, fp.product(), fp.report.parameters);
    if (want_schedule)
      schedule = steps_schedule({{true, 0.0, -fp.psi_prime},
                                 {false, 0.5 * pi, -fp.theta},
                                 {true, 0.0, fp.alpha},
                                 {false, 0.5 * pi, fp.theta},
                                 {true, 0.0, fp.psi_prime}},
                                nu, hbar, rf_omega);
  } else if (method == "su3") {
    if (target.rows() != 3) throw std::invalid_argument("su3 synthesis needs a 3x3 target");
    if (want_schedule) throw std::invalid_argument("no pulse schedule is defined for the su3 method");
    const Su3Decomposition sd = su3_decompose(target);
    report = sd.report;
    plan["r01"] = matrix_to_json(sd.r01);
    plan["r02"] = matrix_to_json(sd.r02);
    plan["r12"] = matrix_to_json(sd.r12);
  } else if (method == "commuting") {
    int index = 0;
    if (name == "x01") index = 1;
    if (name == "x02") index = 2;
    if (name == "x12") index = 3;
    if (index == 0) throw std::invalid_argument("the commuting method synthesizes x01, x02 or x12 only");
    const double eps = param(p, "eps", 0.05 * nu);
    const CommutingXPlan cp = plan_commuting_x_gate(index, eps, nu, hbar);
    report = cp.report;
    plan["cycles"] = cp.cycles;
    plan["eps"] = cp.eps;
    plan["revival_period"] = cp.revival_period;
    plan["total_time"] = cp.total_time;
    plan["eps_times_total_time"] = cp.eps * cp.total_time / hbar;
    if (want_schedule) {
      const std::vector<double> w{2.0 * pi / cp.revival_period};
      schedule = sfq_schedule(SfqKind::ResonantZ, w, cp.cycles);
    }
  } else {
    throw std::invalid_argument("unknown synthesis method '" + method + "'");
  }
  r["report"] = to_json(report);
  r["plan"] = plan.is_null() ? Json::object() : plan;
  r["schedule"] = schedule ? to_json(*schedule) : Json(nullptr);
  const bool pass = report.phase_distance <= 1e-9;
  r["pass"] = pass;
  return {pass ? kExitOk : kExitValidation, artifact_json(cfg, std::move(r))};
}

// ---- pulse-plan ----

CommandResult cmd_pulse_plan(const RunConfig& cfg) {
  const Json& p = cfg.params;
  const SfqKind kind = sfq_kind_from_string(param<std::string>(p, "kind", "resonant_z"));
  const int n = param(p, "n_pulses", 40);
  std::vector<double> omegas = param(p, "omegas", std::vector<double>{});
  if (omegas.empty()) omegas.assign(kind == SfqKind::ResonantZ ? 1 : std::max(n, 1), 2.0 * pi * 10.0);
  const PulseSchedule s = sfq_schedule(kind, omegas, n);
  Json r;
  r["kind"] = to_string(kind);
  r["schedule"] = to_json(s);
  return {kExitOk, artifact_json(cfg, std::move(r))};
}

// ---- oracle ----

CommandResult cmd_oracle(const RunConfig& cfg) {
  const Json& p = cfg.params;
  const std::string shape = param<std::string>(p, "potential", "double");
  const double m = param(p, "m", 1.0);
  const double hbar = param(p, "hbar", 1.0);
  const double v0 = param(p, "v0", 50.0 * pi * pi / 2.0);
  const double l = param(p, "l", 1.0);
  const bool strict = param(p, "strict", false);
  const double a = p.contains("a") ? param(p, "a", 0.0) : barrier_width_for_action(v0, l, param(p, "action", 4.0), m, hbar);

  PiecewisePotential pot;
  int d = 2;
  if (shape == "double") {
    pot = square_double_well(v0, l, a);
  } else if (shape == "tilted") {
    pot = tilted_square_double_well(v0, l, a, param(p, "delta", 0.0));
  } else if (shape == "periodic") {
    d = param(p, "d", 3);
    pot = periodic_d_well(d, v0, l, a);
  } else if (shape == "custom") {
    if (!p.contains("potential_spec")) throw std::invalid_argument("custom potential needs 'potential_spec'");
    pot = potential_from_json(p.at("potential_spec"));
    d = param(p, "d", 2);
  } else {
    throw std::invalid_argument("unknown potential '" + shape + "'");
  }
  const int n_points = param(p, "n_points", pot.boundary == Boundary::Periodic ? 256 * d : 2048);
  const int levels = param(p, "levels", std::max(3, d + 1));

  Json r;
  r["potential"] = to_json(pot);
  bool pass = true;
  std::vector<std::string> failures;
  std::optional<GridSolution> sol;
  try {
    sol = solve_grid(pot, n_points, levels, m, hbar);
    r["eigenvalues"] = real_array(sol->eigenvalues);
    const ReductionReport red = validate_reduction(*sol, d);
    r["reduction"] = to_json(red);
    if (!red.pass) failures.push_back("reduction ratio above threshold");

    if (pot.boundary == Boundary::HardWall && d == 2) {
      const double split = barrier_center(pot);
      const TwoLevelReduction two = effective_two_level(*sol, split);
      Json t;
      t["nu_eff"] = two.nu_eff;
      t["gap_ratio"] = two.gap_ratio;
      t["right_weight_of_right"] = two.right_weight_of_right;
      r["two_level"] = std::move(t);
      const double e = 0.5 * (sol->eigenvalues(0) + sol->eigenvalues(1));
      if (shape == "double") {
        const WkbResult sq = wkb_tunneling(pot, e, WkbFormula::Square, m, hbar);
        const WkbResult gen = wkb_tunneling(pot, e, WkbFormula::General, m, hbar);
        Json w;
        w["square"] = to_json(sq);
        w["general"] = to_json(gen);
        w["square_over_grid"] = sq.nu / two.nu_eff;
        w["within_25_percent"] = std::abs(sq.nu / two.nu_eff - 1.0) <= 0.25;
        if (!w["within_25_percent"].get<bool>()) failures.push_back("WKB estimate off by more than 25%");
        r["wkb"] = std::move(w);
      }
    }
    if (shape == "tilted") {
      const AsymmetricReport ar = asymmetric_nu(pot, n_points, m, hbar);
      const double model = 2.0 * std::hypot(0.5 * ar.delta_eps, ar.nu);
      const double grid = sol->eigenvalues(1) - sol->eigenvalues(0);
      const double theta = mixing_angle(ar.nu, ar.delta_eps);
      const double left = 1.0 - sol->weight_right_of(0, ar.barrier_center);
      Json t = to_json(ar);
      t["model_gap"] = model;
      t["grid_gap"] = grid;
      t["gap_relative_error"] = std::abs(model / grid - 1.0);
      t["mixing_angle"] = theta;
      t["grid_left_weight"] = left;
      t["model_left_weight"] = std::pow(std::sin(0.5 * theta), 2);
      if (std::abs(model / grid - 1.0) > 0.1) failures.push_back("asymmetric gap off by more than 10%");
      if (std::abs(left - std::pow(std::sin(0.5 * theta), 2)) > 0.05) failures.push_back("ground-state weights off by more than 0.05");
      r["asymmetric"] = std::move(t);
    }
    if (pot.boundary == Boundary::Periodic) {
      const BandFit fit = fit_cosine_band(*sol, d);
      r["band_fit"] = to_json(fit);
      if (!(fit.relative_residual < 0.02)) failures.push_back("band fit residual above 2% of bandwidth");
    }
    r["regime_error"] = nullptr;
  } catch (const RegimeError& e) {
    r["regime_error"] = e.what();
    failures.push_back(e.what());
  }
  pass = failures.empty();
  r["failures"] = failures;
  r["pass"] = pass;

  CommandResult out;
  out.exit_code = (strict && !pass) ? kExitValidation : kExitOk;
  if (cfg.output_format == "csv") {
    if (!sol) throw std::invalid_argument("no grid solution to export: " + r["regime_error"].get<std::string>());
    out.artifact = csv_header(cfg) + grid_solution_csv(*sol);
  } else {
    out.artifact = artifact_json(cfg, std::move(r));
  }
  return out;
}

// ---- validate ----

CommandResult cmd_validate(const RunConfig& cfg) {
  const Json& p = cfg.params;
  const int samples = param(p, "samples", 200);
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  std::mt19937_64 rng(cfg.seed);
  Json checks = Json::array();
  bool all = true;
  auto record = [&](const std::string& name, double value, double tol) {
    const bool ok = value <= tol;
    all = all && ok;
    checks.push_back({{"name", name}, {"value", value}, {"tolerance", tol}, {"pass", ok}});
  };

  double spec_res = 0.0;
  std::vector<HamiltonianSpec> specs{HamiltonianSpec::symmetric_double(1.0), HamiltonianSpec::asymmetric_double(1.0, 0.7),
                                     HamiltonianSpec::periodic_triple(1.0)};
  for (int d = 2; d <= 8; ++d) specs.push_back(HamiltonianSpec::fully_connected(d, 1.0));
  for (int d = 2; d <= 12; ++d) specs.push_back(HamiltonianSpec::cyclic_chain(d, 1.0));
  for (const auto& s : specs) {
    const Spectrum sp = hermitian_eig(build_hamiltonian(s));
    const auto an = analytic_spectrum(s);
    for (int i = 0; i < sp.dim(); ++i) spec_res = std::max(spec_res, std::abs(sp.eigenvalues(i) - an[i]));
  }
  record("analytic spectra", spec_res, 1e-12);

  const RevivalReport r3 = revival_period(build_hamiltonian(HamiltonianSpec::periodic_triple(1.0)));
  record("triple-well revival period", r3.found ? std::abs(r3.period - 2.0 * pi / 3.0) : 1.0, 1e-10);

  std::uniform_real_distribution<double> eps_dist(0.01, 0.5);
  std::uniform_int_distribution<int> cycle_dist(1, 20);
  double comm = 0.0;
  for (int i = 1; i <= 3; ++i)
    for (int k = 0; k < 5; ++k) {
      const double eps = eps_dist(rng);
      const int cycles = cycle_dist(rng);
      comm = std::max(comm, commuting_gate(i, eps, cycles).phase_distance);
    }
  record("commuting gates", comm, 1e-11);

  double two = 0.0, five = 0.0, su3 = 0.0;
  for (int k = 0; k < samples; ++k) {
    const ComplexMatrix u = haar_special_unitary(2, rng);
    two = std::max(two, decompose_two_step(u).report.phase_distance);
    const FiveStepPlan fp = euler_five_step(axis_angle_of(u));
    five = std::max(five, global_phase_distance(u, fp.product()));
    su3 = std::max(su3, su3_decompose(haar_unitary(3, rng)).report.phase_distance);
  }
  record("two-step decomposition", two, 1e-9);
  record("five-step decomposition", five, 1e-9);
  record("su3 decomposition", su3, 1e-9);

  const Spectrum jc = hermitian_eig(cyclic_current(3));
  const double jres = std::max({std::abs(jc.eigenvalues(0) + std::sqrt(3.0)), std::abs(jc.eigenvalues(1)),
                                std::abs(jc.eigenvalues(2) - std::sqrt(3.0))});
  record("cyclic current spectrum", jres, 1e-12);

  Json r;
  r["samples"] = samples;
  r["checks"] = std::move(checks);
  r["pass"] = all;
  return {all ? kExitOk : kExitValidation, artifact_json(cfg, std::move(r))};
}

// ---- option plumbing ----

class Flags {
 public:
  explicit Flags(CLI::App* app) : app_(app) {}

  template <typename T>
  void option(const std::string& names, const std::string& key, const std::string& help) {
    auto holder = std::make_shared<T>();
    CLI::Option* o = app_->add_option(names, *holder, help);
    bound_.push_back({key, o, [holder] { return Json(*holder); }});
  }

  /// Option whose text is parsed as JSON.
  void json_option(const std::string& names, const std::string& key, const std::string& help) {
    auto holder = std::make_shared<std::string>();
    CLI::Option* o = app_->add_option(names, *holder, help);
    bound_.push_back({key, o, [holder, key] {
                        try {
                          return Json::parse(*holder);
                        } catch (const nlohmann::json::exception& e) {
                          throw std::invalid_argument("option for '" + key + "' is not valid JSON: " + e.what());
                        }
                      }});
  }

  void flag(const std::string& names, const std::string& key, Json value, const std::string& help) {
    CLI::Option* o = app_->add_flag(names, help);
    bound_.push_back({key, o, [value] { return value; }});
  }

  void merge_into(Json& params) const {
    for (const auto& b : bound_)
      if (b.opt->count() > 0) params[b.key] = b.value();
  }

 private:
  struct Bound {
    std::string key;
    CLI::Option* opt;
    std::function<Json()> value;
  };
  CLI::App* app_;
  std::vector<Bound> bound_;
};

void hamiltonian_flags(Flags& f) {
  f.option<std::string>("--topology", "topology", "symmetric-double, asymmetric-double, periodic-triple, fully-connected, cyclic, custom");
  f.option<double>("--nu", "nu", "tunneling amplitude");
  f.option<double>("--delta-eps", "delta_eps", "well asymmetry eps_L - eps_R");
  f.option<int>("--d", "d", "number of wells");
  f.option<std::string>("--perturbation", "perturbation", "perturbation kind added to the Hamiltonian");
  f.option<double>("--epsilon", "epsilon", "perturbation strength");
  f.option<double>("--hbar", "hbar", "reduced Planck constant");
}

struct Sub {
  CLI::App* app = nullptr;
  std::unique_ptr<Flags> flags;
  std::string config_path;
  std::string output;
  std::string format;
  std::uint64_t seed = 0;
  CLI::Option* output_opt = nullptr;
  CLI::Option* format_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

Json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  return j;
}

}  // namespace

Json RunConfig::to_json() const {
  Json j;
  j["command"] = command;
  j["params"] = params;
  j["output_path"] = output_path;
  j["output_format"] = output_format;
  j["seed"] = seed;
  return j;
}

RunConfig RunConfig::from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("run config must be a JSON object");
  RunConfig c;
  c.command = j.value("command", std::string{});
  c.params = j.value("params", Json::object());
  if (!c.params.is_object()) throw std::invalid_argument("'params' must be an object");
  c.output_path = j.value("output_path", std::string{});
  c.output_format = j.value("output_format", std::string{});
  c.seed = j.value("seed", std::uint64_t{0});
  return c;
}

CommandResult execute(const RunConfig& config) {
  RunConfig cfg = config;
  if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end())
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
  if (cfg.output_format.empty()) cfg.output_format = cfg.command == "evolve" ? "csv" : "json";
  if (cfg.output_format != "json" && cfg.output_format != "csv")
    throw std::invalid_argument("output format must be json or csv");
  if (cfg.output_format == "csv" && cfg.command != "evolve" && cfg.command != "oracle")
    throw std::invalid_argument("csv output is available for evolve and oracle only");

  if (cfg.command == "spectrum") return cmd_spectrum(cfg);
  if (cfg.command == "evolve") return cmd_evolve(cfg);
  if (cfg.command == "revival") return cmd_revival(cfg);
  if (cfg.command == "synth") return cmd_synth(cfg);
  if (cfg.command == "pulse-plan") return cmd_pulse_plan(cfg);
  if (cfg.command == "oracle") return cmd_oracle(cfg);
  return cmd_validate(cfg);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coupled-well qudit simulator and gate synthesizer"};
  app.require_subcommand(1);
  std::vector<Sub> subs;
  subs.reserve(kCommands.size());
  const std::map<std::string, std::string> descriptions{
      {"spectrum", "eigenvalues and degeneracy groups of a well Hamiltonian"},
      {"evolve", "time trace of amplitudes and populations"},
      {"revival", "common period of all eigenphases"},
      {"synth", "decompose a target gate into realizable steps"},
      {"pulse-plan", "SFQ pulse timing"},
      {"oracle", "finite-difference check of the few-level reduction"},
      {"validate", "seeded self-check of the analytic identities"}};

  for (const auto& name : kCommands) {
    Sub& s = subs.emplace_back();
    s.app = app.add_subcommand(name, descriptions.at(name));
    s.flags = std::make_unique<Flags>(s.app);
    s.app->add_option("--config", s.config_path, "JSON config merged under the explicit flags");
    s.output_opt = s.app->add_option("-o,--output", s.output, "artifact path (standard output if omitted)");
    s.format_opt = s.app->add_option("--format", s.format, "json or csv");
    s.seed_opt = s.app->add_option("--seed", s.seed, "seed for randomized checks");
  }
  for (auto& s : subs) {
    Flags& f = *s.flags;
    const std::string name = s.app->get_name();
    if (name == "spectrum" || name == "evolve" || name == "revival") hamiltonian_flags(f);
    if (name == "evolve") {
      f.option<std::string>("--initial", "initial", "well-k, uniform, current-plus, current-minus or custom");
      f.json_option("--amplitudes", "amplitudes", "custom amplitudes as JSON [[re, im], ...]");
      f.option<double>("--t-max", "t_max", "end of the time grid");
      f.option<int>("--steps", "steps", "number of time steps");
    }
    if (name == "revival") {
      f.option<double>("--tol", "tol", "identity tolerance at the period");
      f.option<long long>("--max-harmonic", "max_harmonic", "largest harmonic denominator searched");
    }
    if (name == "synth") {
      f.option<std::string>("--target", "target", "hadamard, not, y, z, s, t, identity, qft3, x01, x02, x12");
      f.json_option("--target-matrix", "target_matrix", "explicit target as JSON rows of [re, im]");
      f.option<std::string>("--method", "method", "two-step, five-step, su3 or commuting");
      f.option<double>("--nu", "nu", "tunneling amplitude");
      f.option<double>("--eps", "eps", "commuting perturbation strength hint");
      f.option<double>("--hbar", "hbar", "reduced Planck constant");
      f.option<double>("--rf-omega", "rf_omega", "angular frequency of the RF route for z steps");
      f.flag("--schedule", "schedule", true, "emit an SFQ pulse schedule");
    }
    if (name == "pulse-plan") {
      f.option<std::string>("--kind", "kind", "resonant_z or axis_tilt");
      f.option<std::vector<double>>("--omega", "omegas", "angular frequencies");
      f.option<int>("--n-pulses", "n_pulses", "number of pulses");
    }
    if (name == "oracle") {
      f.option<std::string>("--potential", "potential", "double, tilted, periodic or custom");
      f.flag("--periodic", "potential", "periodic", "periodic d-well ring");
      f.option<int>("--d", "d", "number of wells on the ring");
      f.option<double>("--v0", "v0", "barrier height");
      f.option<double>("--l", "l", "well width");
      f.option<double>("--a", "a", "barrier width");
      f.option<double>("--action", "action", "barrier action in units of hbar (sets a when --a is absent)");
      f.option<double>("--delta", "delta", "tilt between the well floors");
      f.option<int>("--n-points", "n_points", "grid points");
      f.option<int>("--levels", "levels", "number of levels to solve");
      f.option<double>("--m", "m", "particle mass");
      f.option<double>("--hbar", "hbar", "reduced Planck constant");
      f.flag("--strict", "strict", true, "exit 3 when a check fails");
    }
    if (name == "validate") f.option<int>("--samples", "samples", "random targets per decomposition");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    const Sub* active = nullptr;
    for (const auto& s : subs)
      if (s.app->parsed()) active = &s;
    RunConfig cfg;
    if (!active->config_path.empty()) {
      const Json file = load_config(active->config_path);
      if (file.contains("params")) {
        cfg = RunConfig::from_json(file);
      } else {
        cfg.params = file;
        for (const char* key : {"output_path", "output_format", "seed", "command"}) cfg.params.erase(key);
        cfg.output_path = file.value("output_path", std::string{});
        cfg.output_format = file.value("output_format", std::string{});
        cfg.seed = file.value("seed", std::uint64_t{0});
      }
    }
    cfg.command = active->app->get_name();
    active->flags->merge_into(cfg.params);
    if (active->output_opt->count() > 0) cfg.output_path = active->output;
    if (active->format_opt->count() > 0) cfg.output_format = active->format;
    if (active->seed_opt->count() > 0) cfg.seed = active->seed;
    if (cfg.output_format.empty()) cfg.output_format = cfg.command == "evolve" ? "csv" : "json";

    const CommandResult res = execute(cfg);
    if (cfg.output_path.empty())
      out << res.artifact;
    else
      write_file_atomic(cfg.output_path, res.artifact);
    if (res.exit_code == kExitValidation) err << "validation failed\n";
    return res.exit_code;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RegimeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qw::cli
