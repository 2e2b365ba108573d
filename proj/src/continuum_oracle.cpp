#include "qudit_wells/continuum_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace qw {

using std::numbers::pi;

std::string to_string(Boundary b) { return b == Boundary::HardWall ? "hard_wall" : "periodic"; }

Boundary boundary_from_string(const std::string& name) {
  if (name == "hard_wall" || name == "hard-wall") return Boundary::HardWall;
  if (name == "periodic") return Boundary::Periodic;
  throw std::invalid_argument("unknown boundary '" + name + "'");
}

std::string to_string(WkbFormula f) { return f == WkbFormula::General ? "general" : "square"; }

void PiecewisePotential::validate() const {
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max))
    throw std::invalid_argument("potential: domain must satisfy x_min < x_max");
  if (segments.empty()) throw std::invalid_argument("potential: no segments");
  if (cells < 1) throw std::invalid_argument("potential: cells must be >= 1");
  const double tol = 1e-12 * std::max(1.0, length());
  double cursor = x_min;
  for (const auto& s : segments) {
    if (std::abs(s.x_lo - cursor) > tol) throw std::invalid_argument("potential: segments leave a gap or overlap");
    if (!(s.x_hi > s.x_lo)) throw std::invalid_argument("potential: empty segment");
    if (!std::isfinite(s.value)) throw std::invalid_argument("potential: non-finite value");
    cursor = s.x_hi;
  }
  if (std::abs(cursor - x_max) > tol) throw std::invalid_argument("potential: segments do not reach x_max");
}

double PiecewisePotential::operator()(double x) const {
  if (boundary == Boundary::Periodic) {
    x = x_min + std::fmod(x - x_min, length());
    if (x < x_min) x += length();
  }
  for (const auto& s : segments)
    if (x < s.x_hi) return s.value;
  return segments.back().value;
}

namespace {

// Integral of V from x_min to x for x in [x_min, x_max].
double cumulative(const PiecewisePotential& pot, double x) {
  double acc = 0.0;
  for (const auto& s : pot.segments) {
    if (x <= s.x_lo) break;
    acc += s.value * (std::min(x, s.x_hi) - s.x_lo);
  }
  return acc;
}

double integral(const PiecewisePotential& pot, double x) {
  const double len = pot.length();
  if (pot.boundary == Boundary::HardWall) return cumulative(pot, std::clamp(x, pot.x_min, pot.x_max));
  const double turns = std::floor((x - pot.x_min) / len);
  return turns * cumulative(pot, pot.x_max) + cumulative(pot, x - turns * len);
}

}  // namespace

double PiecewisePotential::average(double lo, double hi) const {
  if (!(hi > lo)) return (*this)(lo);
  if (boundary == Boundary::HardWall) {
    lo = std::max(lo, x_min);
    hi = std::min(hi, x_max);
  }
  return (integral(*this, hi) - integral(*this, lo)) / (hi - lo);
}

double PiecewisePotential::min_value() const {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& s : segments) v = std::min(v, s.value);
  return v;
}

double PiecewisePotential::max_value() const {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& s : segments) v = std::max(v, s.value);
  return v;
}

namespace {

void require_geometry(double v0, double l, double a) {
  if (!(v0 > 0.0) || !(l > 0.0) || !(a > 0.0) || !std::isfinite(v0) || !std::isfinite(l) || !std::isfinite(a))
    throw std::invalid_argument("well geometry requires V0 > 0, l > 0 and a > 0");
}

// Joins neighbouring segments of equal value.
void merge_segments(PiecewisePotential& pot) {
  std::vector<PotentialSegment> out;
  for (const auto& s : pot.segments) {
    if (!out.empty() && out.back().value == s.value)
      out.back().x_hi = s.x_hi;
    else
      out.push_back(s);
  }
  pot.segments = std::move(out);
}

}  // namespace

PiecewisePotential infinite_square_well(double width) {
  if (!(width > 0.0)) throw std::invalid_argument("infinite_square_well: width must be positive");
  PiecewisePotential p;
  p.x_min = 0.0;
  p.x_max = width;
  p.segments = {{0.0, width, 0.0}};
  p.well_width = width;
  return p;
}

PiecewisePotential square_double_well(double v0, double l, double a) { return tilted_square_double_well(v0, l, a, 0.0); }

PiecewisePotential tilted_square_double_well(double v0, double l, double a, double delta) {
  require_geometry(v0, l, a);
  if (!std::isfinite(delta) || std::abs(delta) / 2.0 >= v0)
    throw std::invalid_argument("tilted_square_double_well: both well floors must lie below the barrier");
  PiecewisePotential p;
  const double half = l + 0.5 * a;
  p.x_min = -half;
  p.x_max = half;
  p.segments = {{-half, -0.5 * a, 0.5 * delta}, {-0.5 * a, 0.5 * a, v0}, {0.5 * a, half, -0.5 * delta}};
  p.well_width = l;
  p.barrier_width = a;
  p.barrier_height = v0;
  return p;
}

PiecewisePotential periodic_d_well(int d, double v0, double l, double a) {
  if (d < 2) throw std::invalid_argument("periodic_d_well: d must be >= 2");
  require_geometry(v0, l, a);
  PiecewisePotential p;
  p.boundary = Boundary::Periodic;
  p.cells = d;
  const double cell = l + a;
  p.x_min = 0.0;
  p.x_max = d * cell;
  for (int c = 0; c < d; ++c) {
    const double x0 = c * cell;
    p.segments.push_back({x0, x0 + 0.5 * a, v0});
    p.segments.push_back({x0 + 0.5 * a, x0 + 0.5 * a + l, 0.0});
    p.segments.push_back({x0 + 0.5 * a + l, c + 1 == d ? p.x_max : x0 + cell, v0});
  }
  merge_segments(p);
  p.well_width = l;
  p.barrier_width = a;
  p.barrier_height = v0;
  return p;
}

PiecewisePotential restrict_hard_wall(const PiecewisePotential& pot, double lo, double hi) {
  if (!(hi > lo) || lo < pot.x_min || hi > pot.x_max)
    throw std::invalid_argument("restrict_hard_wall: interval must lie inside the domain");
  PiecewisePotential p;
  p.x_min = lo;
  p.x_max = hi;
  for (const auto& s : pot.segments) {
    const double a = std::max(lo, s.x_lo), b = std::min(hi, s.x_hi);
    if (b > a) p.segments.push_back({a, b, s.value});
  }
  p.segments.front().x_lo = lo;
  p.segments.back().x_hi = hi;
  p.well_width = pot.well_width;
  return p;
}

double barrier_center(const PiecewisePotential& pot) {
  if (pot.segments.size() < 3) throw std::invalid_argument("barrier_center: no interior segment");
  const double mid = 0.5 * (pot.x_min + pot.x_max);
  std::size_t best = 1;
  for (std::size_t i = 2; i + 1 < pot.segments.size(); ++i) {
    const auto& s = pot.segments[i];
    const auto& b = pot.segments[best];
    const double cs = 0.5 * (s.x_lo + s.x_hi), cb = 0.5 * (b.x_lo + b.x_hi);
    if (s.value > b.value || (s.value == b.value && std::abs(cs - mid) < std::abs(cb - mid))) best = i;
  }
  return 0.5 * (pot.segments[best].x_lo + pot.segments[best].x_hi);
}

double GridSolution::weight_right_of(int j, double split) const {
  double w = 0.0;
  for (int i = 0; i < n_points; ++i)
    if (x(i) > split) w += eigenvectors(i, j) * eigenvectors(i, j);
  return w * spacing;
}

namespace {

struct Grid {
  double h = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd v;
};

Grid make_grid(const PiecewisePotential& pot, int n) {
  Grid g;
  g.x.resize(n);
  g.v.resize(n);
  if (pot.boundary == Boundary::HardWall) {
    g.h = pot.length() / (n + 1);
    for (int j = 0; j < n; ++j) {
      const int i = j + 1;
      // measured from the nearer wall so mirror points are exact negatives
      g.x(j) = 2 * i <= n + 1 ? pot.x_min + i * g.h : pot.x_max - (n + 1 - i) * g.h;
    }
    for (int j = 0; j < n; ++j) g.v(j) = pot.average(g.x(j) - 0.5 * g.h, g.x(j) + 0.5 * g.h);
  } else {
    g.h = pot.length() / n;
    for (int j = 0; j < n; ++j) g.x(j) = pot.x_min + j * g.h;
    const int period = (pot.cells > 1 && n % pot.cells == 0) ? n / pot.cells : n;
    for (int j = 0; j < period; ++j) g.v(j) = pot.average(g.x(j) - 0.5 * g.h, g.x(j) + 0.5 * g.h);
    for (int j = period; j < n; ++j) g.v(j) = g.v(j % period);
  }
  return g;
}

// Lowest k eigenpairs of the Dirichlet tridiagonal with diagonal `diag` and constant off-diagonal `off`.
void tridiagonal_lowest(const Eigen::VectorXd& diag, double off, int k, Eigen::VectorXd& w, Eigen::MatrixXd& z) {
  const lapack_int n = static_cast<lapack_int>(diag.size());
  std::vector<double> d(diag.data(), diag.data() + n);
  std::vector<double> e(std::max<lapack_int>(n, 1), off);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(k));
  w.resize(n);
  z.resize(n, k);
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, k,
                                         LAPACKE_dlamch('S'), &found, w.data(), z.data(), n, isuppz.data());
  if (info != 0 || found != k) throw std::runtime_error("tridiagonal eigensolver failed (info " + std::to_string(info) + ")");
  w.conservativeResize(k);
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  const double cutoff = 1e-3 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > cutoff) {
      if (v(i) < 0.0) v = -v;
      return;
    }
}

}  // namespace

GridSolution solve_grid(const PiecewisePotential& pot, int n_points, int k, double m, double hbar) {
  pot.validate();
  if (n_points < 64) throw std::invalid_argument("solve_grid: n_points must be >= 64");
  if (k < 1 || k > 12) throw std::invalid_argument("solve_grid: k must be in 1..12");
  if (!(m > 0.0) || !(hbar > 0.0)) throw std::invalid_argument("solve_grid: m and hbar must be positive");

  const Grid g = make_grid(pot, n_points);
  const double t = hbar * hbar / (2.0 * m * g.h * g.h);
  GridSolution sol;
  sol.boundary = pot.boundary;
  sol.n_points = n_points;
  sol.spacing = g.h;
  sol.x_min = pot.x_min;
  sol.x_max = pot.x_max;
  sol.x = g.x;
  sol.potential = g.v;

  Eigen::VectorXd w;
  Eigen::MatrixXd z;
  if (pot.boundary == Boundary::HardWall) {
    tridiagonal_lowest(g.v.array() + 2.0 * t, -t, k, w, z);
  } else {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_points, n_points);
    for (int j = 0; j < n_points; ++j) {
      a(j, j) = g.v(j) + 2.0 * t;
      const int next = (j + 1) % n_points;
      a(j, next) -= t;
      a(next, j) -= t;
    }
    const lapack_int n = n_points;
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(k));
    w.resize(n);
    z.resize(n, k);
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0, 0.0, 1, k,
                                           LAPACKE_dlamch('S'), &found, w.data(), z.data(), n, isuppz.data());
    if (info != 0 || found != k) throw std::runtime_error("symmetric eigensolver failed (info " + std::to_string(info) + ")");
    w.conservativeResize(k);
  }

  const double resolution = g.h * std::sqrt(2.0 * m * std::max(0.0, w(k - 1) - g.v.minCoeff())) / hbar;
  if (resolution > 0.5)
    throw RegimeError("solve_grid: level " + std::to_string(k - 1) + " is not resolved by the grid (h k = " +
                      std::to_string(resolution) + " > 0.5)");

  sol.eigenvalues = w;
  sol.eigenvectors = z / std::sqrt(g.h);
  for (int j = 0; j < k; ++j) fix_sign(sol.eigenvectors.col(j));
  return sol;
}

TwoLevelReduction effective_two_level(const GridSolution& sol) {
  return effective_two_level(sol, 0.5 * (sol.x_min + sol.x_max));
}

TwoLevelReduction effective_two_level(const GridSolution& sol, double split) {
  if (sol.levels() < 3) throw std::invalid_argument("effective_two_level: needs at least three levels");
  const Eigen::VectorXd& e = sol.eigenvalues;
  TwoLevelReduction r;
  r.nu_eff = 0.5 * (e(1) - e(0));
  r.gap_ratio = (e(1) - e(0)) / (e(2) - e(1));
  if (!(r.gap_ratio < 0.2))
    throw RegimeError("effective_two_level: gap ratio " + std::to_string(r.gap_ratio) + " leaves the two-level regime");

  const Eigen::VectorXd p0 = sol.eigenvectors.col(0), p1 = sol.eigenvectors.col(1);
  auto right_weight = [&](const Eigen::VectorXd& v) {
    double w = 0.0;
    for (int i = 0; i < sol.n_points; ++i)
      if (sol.x(i) > split) w += v(i) * v(i);
    return w * sol.spacing;
  };
  r.psi_right = (p0 - p1) / std::sqrt(2.0);
  r.psi_left = (p0 + p1) / std::sqrt(2.0);
  if (right_weight(r.psi_right) < 0.5) std::swap(r.psi_left, r.psi_right);
  r.right_weight_of_right = right_weight(r.psi_right);
  r.overlap = r.psi_left.dot(r.psi_right) * sol.spacing;
  return r;
}

namespace {

using boost::math::quadrature::gauss_kronrod;

double segment_integral(const std::function<double(double)>& f, double a, double b) {
  return gauss_kronrod<double, 15>::integrate(f, a, b, 15, 1e-13);
}

}  // namespace

WkbResult wkb_tunneling(const PiecewisePotential& pot, double energy, WkbFormula formula, double m, double hbar) {
  pot.validate();
  if (!(m > 0.0) || !(hbar > 0.0)) throw std::invalid_argument("wkb_tunneling: m and hbar must be positive");
  const double c = barrier_center(pot);
  const auto& segs = pot.segments;
  std::size_t mid = 0;
  while (mid + 1 < segs.size() && !(c < segs[mid].x_hi)) ++mid;
  if (!(energy < segs[mid].value))
    throw std::invalid_argument("wkb_tunneling: energy " + std::to_string(energy) + " is not below the barrier");

  // contiguous forbidden region around the barrier centre
  std::size_t lo = mid, hi = mid;
  while (lo > 0 && segs[lo - 1].value > energy) --lo;
  while (hi + 1 < segs.size() && segs[hi + 1].value > energy) ++hi;
  if (lo == 0 || hi + 1 == segs.size())
    throw std::invalid_argument("wkb_tunneling: the forbidden region reaches the domain edge");

  WkbResult r;
  r.formula = formula;
  r.energy = energy;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double v = segs[i].value;
    r.barrier_integral += segment_integral([&](double) { return std::sqrt(2.0 * m * (v - energy)); }, segs[i].x_lo,
                                           segs[i].x_hi);
  }
  const double tunnel = std::exp(-r.barrier_integral / hbar);

  if (formula == WkbFormula::Square) {
    const double v0 = pot.barrier_height, l = pot.well_width;
    if (!(v0 > 0.0) || !(l > 0.0) || !(pot.barrier_width > 0.0))
      throw std::invalid_argument("wkb_tunneling: square formula needs labelled well width and barrier height");
    if (!(energy < v0)) throw std::invalid_argument("wkb_tunneling: energy is not below V0");
    r.nu = 2.0 * hbar * energy * std::sqrt(2.0 * m * (v0 - energy)) / (m * v0 * l) * tunnel;
    return r;
  }

  // classical period in the allowed region left of the barrier
  double period = 0.0;
  std::size_t i = lo;
  while (i > 0 && segs[i - 1].value < energy) {
    --i;
    const double v = segs[i].value;
    period += 2.0 * segment_integral([&](double) { return std::sqrt(m / (2.0 * (energy - v))); }, segs[i].x_lo,
                                     segs[i].x_hi);
  }
  if (!(period > 0.0)) throw std::invalid_argument("wkb_tunneling: no classically allowed region left of the barrier");
  r.attempt_frequency = 2.0 * pi / period;
  r.nu = hbar * r.attempt_frequency / (2.0 * pi) * tunnel;
  return r;
}

double half_open_well_ground_energy(double v0, double l, double m, double hbar) {
  require_geometry(v0, l, 1.0);
  const double k_max = std::sqrt(2.0 * m * v0) / hbar;
  if (!(k_max * l > 0.5 * pi)) throw std::invalid_argument("half_open_well_ground_energy: the well holds no bound state");
  // k cos(kl) + kappa sin(kl) = 0 on (pi / 2l, min(pi / l, k_max))
  auto f = [&](double k) {
    const double kappa = std::sqrt(std::max(0.0, k_max * k_max - k * k));
    return k * std::cos(k * l) + kappa * std::sin(k * l);
  };
  double a = 0.5 * pi / l, b = std::min(pi / l, k_max);
  for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
    const double c = 0.5 * (a + b);
    (f(c) > 0.0 ? a : b) = c;
  }
  const double k = 0.5 * (a + b);
  return hbar * hbar * k * k / (2.0 * m);
}

double barrier_width_for_action(double v0, double l, double action, double m, double hbar) {
  if (!(action > 0.0)) throw std::invalid_argument("barrier_width_for_action: action must be positive");
  const double e = half_open_well_ground_energy(v0, l, m, hbar);
  return action * hbar / std::sqrt(2.0 * m * (v0 - e));
}

namespace {

int points_for(double length, double h) { return std::max(64, static_cast<int>(std::lround(length / h)) - 1); }

// Symmetric double well built from the part of `pot` on one side of `c`.
PiecewisePotential mirror_half(const PiecewisePotential& pot, double c, bool left) {
  PiecewisePotential half = left ? restrict_hard_wall(pot, pot.x_min, c) : restrict_hard_wall(pot, c, pot.x_max);
  PiecewisePotential p;
  if (left) {
    p.x_min = pot.x_min;
    p.x_max = 2.0 * c - pot.x_min;
    p.segments = half.segments;
    for (auto it = half.segments.rbegin(); it != half.segments.rend(); ++it)
      p.segments.push_back({2.0 * c - it->x_hi, 2.0 * c - it->x_lo, it->value});
  } else {
    p.x_min = 2.0 * c - pot.x_max;
    p.x_max = pot.x_max;
    for (auto it = half.segments.rbegin(); it != half.segments.rend(); ++it)
      p.segments.push_back({2.0 * c - it->x_hi, 2.0 * c - it->x_lo, it->value});
    p.segments.insert(p.segments.end(), half.segments.begin(), half.segments.end());
  }
  merge_segments(p);
  p.well_width = pot.well_width;
  return p;
}

}  // namespace

AsymmetricReport asymmetric_nu(const PiecewisePotential& pot, int n_points, double m, double hbar) {
  pot.validate();
  if (pot.boundary != Boundary::HardWall) throw std::invalid_argument("asymmetric_nu: needs a hard-wall double well");
  if (n_points < 64) throw std::invalid_argument("asymmetric_nu: n_points must be >= 64");
  AsymmetricReport r;
  r.barrier_center = barrier_center(pot);
  r.barrier_value = pot(r.barrier_center);
  const double h = pot.length() / (n_points + 1);
  const double c = r.barrier_center;

  const PiecewisePotential sym_l = mirror_half(pot, c, true);
  const PiecewisePotential sym_r = mirror_half(pot, c, false);
  r.nu_left = effective_two_level(solve_grid(sym_l, points_for(sym_l.length(), h), 3, m, hbar), c).nu_eff;
  r.nu_right = effective_two_level(solve_grid(sym_r, points_for(sym_r.length(), h), 3, m, hbar), c).nu_eff;

  const PiecewisePotential iso_l = restrict_hard_wall(pot, pot.x_min, c);
  const PiecewisePotential iso_r = restrict_hard_wall(pot, c, pot.x_max);
  const GridSolution gl = solve_grid(iso_l, points_for(iso_l.length(), h), 2, m, hbar);
  const GridSolution gr = solve_grid(iso_r, points_for(iso_r.length(), h), 2, m, hbar);
  r.eps_left = gl.eigenvalues(0);
  r.eps_right = gr.eigenvalues(0);
  r.delta_eps = r.eps_left - r.eps_right;
  const GridSolution& lower = r.eps_left <= r.eps_right ? gl : gr;
  r.one_well_gap = lower.eigenvalues(1) - lower.eigenvalues(0);
  if (std::abs(r.delta_eps) >= r.one_well_gap)
    throw RegimeError("asymmetric_nu: well asymmetry " + std::to_string(r.delta_eps) +
                      " reaches the one-well gap " + std::to_string(r.one_well_gap));
  if (!(r.barrier_value > std::max(r.eps_left, r.eps_right)))
    throw RegimeError("asymmetric_nu: local energies are not below the barrier");

  const double q = (r.barrier_value - r.eps_left) / (r.barrier_value - r.eps_right);
  r.amplitude_factor = 0.5 * (std::pow(q, 0.25) + std::pow(q, -0.25));
  r.nu = r.amplitude_factor * std::sqrt(r.nu_left * r.nu_right);
  return r;
}

ReductionReport validate_reduction(const GridSolution& sol, int d, double threshold) {
  if (d < 1) throw std::invalid_argument("validate_reduction: d must be >= 1");
  if (sol.levels() < d + 1)
    throw std::invalid_argument("validate_reduction: needs " + std::to_string(d + 1) + " levels, got " +
                                std::to_string(sol.levels()));
  ReductionReport r;
  r.d = d;
  r.threshold = threshold;
  r.in_band_spread = sol.eigenvalues(d - 1) - sol.eigenvalues(0);
  r.band_gap = sol.eigenvalues(d) - sol.eigenvalues(d - 1);
  r.ratio = r.in_band_spread / r.band_gap;
  r.pass = r.ratio < threshold;
  return r;
}

BandFit fit_cosine_band(const GridSolution& sol, int d) {
  if (d < 2) throw std::invalid_argument("fit_cosine_band: d must be >= 2");
  if (sol.levels() < d) throw std::invalid_argument("fit_cosine_band: not enough levels");
  std::vector<double> model(d);
  for (int n = 0; n < d; ++n) model[n] = -2.0 * std::cos(2.0 * pi * n / d);
  std::sort(model.begin(), model.end());

  double mm = 0.0, me = 0.0;
  for (int n = 0; n < d; ++n) {
    mm += model[n];
    me += sol.eigenvalues(n);
  }
  mm /= d;
  me /= d;
  double sxy = 0.0, sxx = 0.0;
  for (int n = 0; n < d; ++n) {
    sxy += (model[n] - mm) * (sol.eigenvalues(n) - me);
    sxx += (model[n] - mm) * (model[n] - mm);
  }
  BandFit f;
  f.d = d;
  f.nu_eff = sxy / sxx;
  f.offset = me - f.nu_eff * mm;
  f.bandwidth = sol.eigenvalues(d - 1) - sol.eigenvalues(0);
  for (int n = 0; n < d; ++n)
    f.max_residual = std::max(f.max_residual, std::abs(sol.eigenvalues(n) - f.offset - f.nu_eff * model[n]));
  f.relative_residual = f.bandwidth > 0.0 ? f.max_residual / f.bandwidth : std::numeric_limits<double>::infinity();
  return f;
}

TransferReport grid_transfer_time(const PiecewisePotential& pot, int n_points, double m, double hbar,
                                  int steps_per_transfer) {
  pot.validate();
  if (pot.boundary != Boundary::HardWall) throw std::invalid_argument("grid_transfer_time: needs a hard-wall double well");
  if (steps_per_transfer < 100) throw std::invalid_argument("grid_transfer_time: steps_per_transfer must be >= 100");
  const double c = barrier_center(pot);
  const GridSolution sol = solve_grid(pot, n_points, 3, m, hbar);
  const TwoLevelReduction red = effective_two_level(sol, c);

  TransferReport r;
  r.nu_eff = red.nu_eff;
  r.predicted = pi * hbar / (2.0 * red.nu_eff);

  const Grid g = make_grid(pot, n_points);
  const double t = hbar * hbar / (2.0 * m * g.h * g.h);
  int n_left = 0;
  while (n_left < n_points && g.x(n_left) < c) ++n_left;
  if (n_left < 16 || n_left > n_points - 16) throw std::invalid_argument("grid_transfer_time: barrier too close to a wall");

  Eigen::VectorXd w;
  Eigen::MatrixXd z;
  tridiagonal_lowest(g.v.head(n_left).array() + 2.0 * t, -t, 1, w, z);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n_points);
  psi.head(n_left) = z.col(0).cast<std::complex<double>>();

  // (1 + i dt H' / 2 hbar) psi_next = (1 - i dt H' / 2 hbar) psi, H' = H - (E0 + E1) / 2
  const double shift = 0.5 * (sol.eigenvalues(0) + sol.eigenvalues(1));
  const double dt = r.predicted / steps_per_transfer;
  const std::complex<double> f{0.0, 0.5 * dt / hbar};
  const lapack_int n = n_points;
  std::vector<std::complex<double>> dl(n - 1, f * (-t)), du(n - 1, f * (-t)), dd(n), du2(n - 2);
  for (int j = 0; j < n; ++j) dd[j] = 1.0 + f * (g.v(j) + 2.0 * t - shift);
  std::vector<lapack_int> ipiv(n);
  if (LAPACKE_zgttrf(n, dl.data(), dd.data(), du.data(), du2.data(), ipiv.data()) != 0)
    throw std::runtime_error("grid_transfer_time: factorization failed");

  auto right_population = [&](const Eigen::VectorXcd& v) { return v.tail(n_points - n_left).squaredNorm(); };
  const int total = steps_per_transfer * 3 / 2;
  std::vector<double> pop(total + 1);
  pop[0] = right_population(psi);
  Eigen::VectorXcd rhs(n_points);
  for (int s = 1; s <= total; ++s) {
    for (int j = 0; j < n_points; ++j) {
      std::complex<double> hp = (g.v(j) + 2.0 * t - shift) * psi(j);
      if (j > 0) hp -= t * psi(j - 1);
      if (j + 1 < n_points) hp -= t * psi(j + 1);
      rhs(j) = psi(j) - f * hp;
    }
    if (LAPACKE_zgttrs(LAPACK_COL_MAJOR, 'N', n, 1, dl.data(), dd.data(), du.data(), du2.data(), ipiv.data(),
                       rhs.data(), n) != 0)
      throw std::runtime_error("grid_transfer_time: solve failed");
    psi = rhs;
    pop[s] = right_population(psi);
  }
  r.steps = total;

  const auto best = static_cast<int>(std::max_element(pop.begin() + 1, pop.end() - 1) - pop.begin());
  const double y0 = pop[best - 1], y1 = pop[best], y2 = pop[best + 1];
  const double denom = y0 - 2.0 * y1 + y2;
  const double offset = denom < 0.0 ? 0.5 * (y0 - y2) / denom : 0.0;
  r.measured = (best + offset) * dt;
  r.peak_population = y1 - 0.25 * (y0 - y2) * offset;
  return r;
}

}  // namespace qw
