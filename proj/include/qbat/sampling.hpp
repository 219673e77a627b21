// Random two-qubit states for property checks.

#pragma once

#include <cstdint>
#include <random>

#include "qbat/model.hpp"

namespace qbat {

/// Uniform (Haar) pure state from a normalized complex Gaussian vector.
DensityMatrix random_pure_state(std::mt19937_64& rng);

/// G G^H / Tr(G G^H) with G a 4 x rank complex Gaussian matrix.
DensityMatrix random_mixed_state(std::mt19937_64& rng, std::size_t rank);

/// Cycles through ranks 1..4 so a batch covers pure and mixed states evenly.
DensityMatrix random_state(std::mt19937_64& rng, std::size_t draw_index);

/// Random 2x2 unitary, Haar-distributed.
ComplexMatrix random_unitary_2(std::mt19937_64& rng);

}  // namespace qbat
