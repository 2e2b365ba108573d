#pragma once

#include <random>

#include "doctest.h"
#include "qudit_wells/operator_core.hpp"

namespace qw::test {

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline ComplexMatrix from_real(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  ComplexMatrix m(n, n);
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

inline ComplexMatrix random_hermitian(int d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  ComplexMatrix a(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) a(r, c) = Complex(g(rng), g(rng));
  return (a + a.adjoint()) / 2.0;
}

inline ComplexMatrix triple_well(double nu = 1.0) {
  return -nu * from_real({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
}

}  // namespace qw::test
