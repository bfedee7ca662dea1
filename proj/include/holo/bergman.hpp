#pragma once
// Reproducing kernels of the unit disk and holomorphic projections of
// labeling functions — the truncated optimal Bayes classifiers.
//
// Inner-product convention (fixed globally): <f, g> = integral f conj(g) dV,
// conjugate on the second slot.

#include <functional>
#include <memory>

#include "holo/features.hpp"
#include "holo/quadrature.hpp"

namespace holo {

// 1 / (pi (1 - z conj(zeta))^2); |z| < 1, |zeta| <= 1.
cx bergman_kernel(cx z, cx zeta);

// 1 / (2 pi (1 - z conj(zeta))); |z| < 1, |zeta| = 1.
cx szego_kernel(cx z, cx zeta_boundary);

// Partial sum of phi_k(z) conj(phi_k(zeta)), k < K.
cx truncated_bergman_kernel(cx z, cx zeta, int K);

struct BayesProjection {
  Hypothesis hypothesis;             // over MonomialBasis(K)
  Eigen::VectorXcd monomial_coeffs;  // plain z^k coefficients
};

// Szego projection of a boundary labeler: Fourier coefficients against
// e^{ik theta}/sqrt(2 pi) on the circle rule, extended holomorphically.
// monomial_coeffs[k] = (1/2pi) integral t(e^{i th}) e^{-ik th} d th.
BayesProjection holomorphic_bayes_szego(
    const std::function<double(cx)>& boundary_labeler, int K,
    const QuadratureRule& circle);

// Bergman projection of a disk labeler: <labeler, phi_k> over the disk rule.
BayesProjection holomorphic_bayes_bergman(
    const std::function<double(cx)>& disk_labeler, int K,
    const QuadratureRule& disk);

}  // namespace holo
