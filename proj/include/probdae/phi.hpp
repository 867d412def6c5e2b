#pragma once

#include "probdae/linalg.hpp"

namespace probdae {

/// Matrix exponential by scaling-and-squaring with a degree-13 Padé
/// approximant. Throws on non-finite input or output.
Matrix expm(const Matrix& m);

/// φ_k(z) for k ∈ {0, 1, 2}: φ₀ = e^z, φ_{k+1}(z) = (φ_k(z) − φ_k(0))/z with
/// φ_k(0) = 1/k!. Series evaluation near z = 0 avoids the cancellation.
double phi_scalar(int k, double z);

/// φ₀, φ₁, φ₂ of −τÂ for the kernel-projected operator.
struct PhiSet {
  Matrix phi0;
  Matrix phi1;
  Matrix phi2;
  double tau = 0.0;
};

/// Builds the set via one exponential of the 3k×3k block matrix
/// [[−τÂ, I, 0], [0, 0, I], [0, 0, 0]], whose top block row is
/// [e^{−τÂ}, φ₁(−τÂ), φ₂(−τÂ)]. The recursion residual is verified.
PhiSet build_phi(const Matrix& a_ker, double tau);

/// max_k ‖(−τÂ)·φ_{k+1} − (φ_k − φ_k(0) I)‖_max for k = 0, 1.
double phi_recursion_residual(const Matrix& a_ker, const PhiSet& set);

}  // namespace probdae
