#include "qudit_wells/random_unitary.hpp"

#include <cmath>
#include <stdexcept>

namespace qw {

ComplexMatrix haar_unitary(int d, std::mt19937_64& rng) {
  if (d < 1) throw std::invalid_argument("haar_unitary: d must be >= 1");
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  ComplexMatrix z(d, d);
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) z(r, c) = Complex{gauss(rng), gauss(rng)};
  const Eigen::HouseholderQR<ComplexMatrix> qr(z);
  const ComplexMatrix q = qr.householderQ();
  const ComplexMatrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  ComplexMatrix u = q;
  for (int k = 0; k < d; ++k) u.col(k) *= rmat(k, k) / std::abs(rmat(k, k));
  return u;
}

ComplexMatrix haar_special_unitary(int d, std::mt19937_64& rng) {
  ComplexMatrix u = haar_unitary(d, rng);
  return u * std::exp(-kI * std::arg(u.determinant()) / static_cast<double>(d));
}

}  // namespace qw
