#pragma once

#include "causal/tensor.hpp"

#include <cstdint>
#include <random>

namespace causal {

using Rng = std::mt19937_64;

Matrix ginibre(int rows, int cols, Rng& rng);

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
Matrix haar_unitary(int d, Rng& rng);

/// Random density matrix from the Hilbert-Schmidt ensemble.
Matrix random_density(int d, Rng& rng);

Matrix random_hermitian(int d, Rng& rng);

/// Random instrument with `outcomes` CP maps (one Kraus operator each) whose
/// sum is trace preserving. Returns Choi operators on (in, out).
std::vector<DenseOperator> random_instrument(const SpaceLabel& in, const SpaceLabel& out, int outcomes, Rng& rng);

}  // namespace causal
