#pragma once

#include <random>

#include "qudit_wells/operator_core.hpp"

namespace qw {

/// Haar-distributed d x d unitary: QR of a complex Ginibre matrix with the phases of diag(R) removed.
ComplexMatrix haar_unitary(int d, std::mt19937_64& rng);

/// Haar-distributed element of SU(d).
ComplexMatrix haar_special_unitary(int d, std::mt19937_64& rng);

}  // namespace qw
