#pragma once

#include <cstdint>
#include <random>

#include "decohere/hilbert.hpp"

namespace decohere {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; derives independent per-stream seeds from a base seed and a counter.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t counter);

/// Haar-random pure state.
StateVector random_state(Eigen::Index dim, Rng& rng);

/// Haar-random unitary (QR of a complex Ginibre matrix, phases fixed).
ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng);

/// Random density matrix G G^dagger / Tr with G a dim x rank Ginibre matrix.
DensityMatrix random_density(Eigen::Index dim, Rng& rng, Eigen::Index rank = 0);

/// Random hermitian matrix with i.i.d. complex Gaussian entries, symmetrized.
ComplexMatrix random_hermitian(Eigen::Index dim, Rng& rng, double scale = 1.0);

/// Matrix of i.i.d. complex Gaussian entries.
ComplexMatrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng);

}  // namespace decohere
