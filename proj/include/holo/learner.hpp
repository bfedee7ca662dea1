#pragma once
// Soft-margin support-vector classification over complex feature expansions.
//
// The complex-valued rule minimizes 1/2 ||a||^2 + C sum_n xi_n subject to
//   t_n Re[f(conj z_n)] >= 1 - xi_n,  |Im[f(conj z_n)]| <= xi_n,  xi_n >= 0
// with f = sum_k a_k phi_k, realified into a dense QP over (Re a, Im a, xi).
// The robust variant is the identical program on harmonic-transformed
// features, where the coefficient norm equals the Dirichlet energy.

#include <Eigen/Dense>
#include <memory>
#include <string>

#include "holo/core.hpp"
#include "holo/features.hpp"
#include "holo/qp.hpp"

namespace holo {

enum class FeatureKind { orthonormal, harmonic, ann_projected, ann_projected_harmonic };

std::string to_string(FeatureKind k);
FeatureKind feature_kind_from_string(const std::string& s);

struct TrainConfig {
  double C = 10.0;
  int K = 30;
  FeatureKind kind = FeatureKind::orthonormal;
  bool conjugate_samples = true;  // evaluate features at conj(z_n)
  double qp_tolerance = 1e-10;
  void validate() const;  // throws std::invalid_argument
};

struct TrainedModel {
  Hypothesis hypothesis;
  QPSolution qp;
  Eigen::VectorXd xi;     // per-sample slacks
  Eigen::VectorXd duals;  // multipliers of the margin constraints
  TrainConfig config;
  std::string dataset_fingerprint;

  double training_loss() const { return xi.sum(); }
};

// Builds the feature set a TrainConfig names. Disk kinds use the monomial
// basis (and its harmonic transform); ann kinds use the ReLU projections on
// the interval.
std::shared_ptr<const FeatureSet> make_features(FeatureKind kind, int K);

std::string dataset_fingerprint(const Dataset& data);

TrainedModel train_complex_svc(const Dataset& data, const TrainConfig& cfg);

// Real-coefficient SVC over explicitly supplied real-valued features; no
// imaginary-part constraints.
TrainedModel train_real_svc(const Dataset& data,
                            std::shared_ptr<const FeatureSet> features,
                            const TrainConfig& cfg);

// Complex rule with the feature kind forced to its harmonic counterpart.
TrainedModel train_robust(const Dataset& data, TrainConfig cfg);

// Coefficients of sum_n lambda_n t_n phi(x_n): the dual-form reconstruction,
// which matches the primal coefficients of a real SVC on orthonormal features.
Eigen::VectorXd dual_reconstruction(const TrainedModel& model, const Dataset& data);

// CSV of coefficients plus JSON metadata (config echo, objective, residuals).
std::string model_to_csv(const TrainedModel& model);
std::string model_to_json(const TrainedModel& model);

}  // namespace holo
