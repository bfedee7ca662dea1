#include "holo/bergman.hpp"

#include <cmath>
#include <stdexcept>

namespace holo {

cx bergman_kernel(cx z, cx zeta) {
  cx d = 1.0 - z * std::conj(zeta);
  if (std::abs(d) < 1e-12)
    throw std::domain_error("bergman_kernel: pole at z conj(zeta) = 1");
  return 1.0 / (kPi * d * d);
}

cx szego_kernel(cx z, cx zeta_boundary) {
  cx d = 1.0 - z * std::conj(zeta_boundary);
  if (std::abs(d) < 1e-12)
    throw std::domain_error("szego_kernel: pole at z conj(zeta) = 1");
  return 1.0 / (2.0 * kPi * d);
}

cx truncated_bergman_kernel(cx z, cx zeta, int K) {
  cx q = z * std::conj(zeta);
  cx p = 1.0, s = 0.0;
  for (int k = 0; k < K; ++k) {
    s += (k + 1) / kPi * p;
    p *= q;
  }
  return s;
}

namespace {

BayesProjection package(Eigen::VectorXcd mono, int K) {
  auto basis = std::make_shared<MonomialBasis>(K);
  Eigen::VectorXcd a(K);
  for (int k = 0; k < K; ++k) a[k] = mono[k] / std::sqrt((k + 1) / kPi);
  return {Hypothesis{std::move(basis), std::move(a)}, std::move(mono)};
}

}  // namespace

BayesProjection holomorphic_bayes_szego(
    const std::function<double(cx)>& boundary_labeler, int K,
    const QuadratureRule& circle) {
  if (K < 1) throw std::invalid_argument("holomorphic_bayes_szego: K < 1");
  Eigen::VectorXcd mono = Eigen::VectorXcd::Zero(K);
  for (std::size_t i = 0; i < circle.nodes.size(); ++i) {
    cx zeta = circle.nodes[i];
    double tv = boundary_labeler(zeta) * circle.weights[i] / (2.0 * kPi);
    // e^{-ik theta} accumulated incrementally
    cx e = 1.0, step = std::conj(zeta);
    for (int k = 0; k < K; ++k) {
      mono[k] += tv * e;
      e *= step;
    }
  }
  return package(std::move(mono), K);
}

BayesProjection holomorphic_bayes_bergman(
    const std::function<double(cx)>& disk_labeler, int K,
    const QuadratureRule& disk) {
  if (K < 1) throw std::invalid_argument("holomorphic_bayes_bergman: K < 1");
  MonomialBasis basis(K);
  Eigen::VectorXcd proj = Eigen::VectorXcd::Zero(K);
  Eigen::VectorXcd phis(K);
  for (std::size_t i = 0; i < disk.nodes.size(); ++i) {
    basis.eval(disk.nodes[i], phis.data());
    double fv = disk_labeler(disk.nodes[i]) * disk.weights[i];
    for (int k = 0; k < K; ++k) proj[k] += fv * std::conj(phis[k]);
  }
  // proj holds coefficients over the orthonormal basis; convert to plain
  // monomial coefficients for reporting.
  Eigen::VectorXcd mono(K);
  for (int k = 0; k < K; ++k) mono[k] = proj[k] * std::sqrt((k + 1) / kPi);
  auto fs = std::make_shared<MonomialBasis>(K);
  return {Hypothesis{fs, std::move(proj)}, std::move(mono)};
}

}  // namespace holo
