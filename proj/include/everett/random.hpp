#pragma once

#include <random>

#include <Eigen/Dense>

namespace everett {

/// Haar-distributed random unitary: QR decomposition of a complex Ginibre
/// matrix, with the R diagonal phases folded back into Q. Deterministic
/// for a given engine state.
Eigen::MatrixXcd haar_unitary(int dim, std::mt19937_64& engine);

}  // namespace everett
