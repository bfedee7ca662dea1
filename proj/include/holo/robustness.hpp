#pragma once
// Gradient attacks on trained classifiers, minimal flip radii, decision
// boundary crossing counts, transferability metrics, and the empirical
// normality probe.
//
// The attack direction is the hinge-loss surrogate gradient of the Re-part
// classifier: for u = Re f the spatial gradient is (Re f', -Im f'), i.e.
// conj(f') as a complex number. sign(0) counts as an error everywhere.

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "holo/core.hpp"
#include "holo/features.hpp"
#include "holo/learner.hpp"

namespace holo {

struct AttackConfig {
  double eta = 0.05;        // step size
  int max_iterations = 400;
  double eps_max = 2.0;     // perturbation budget
  double bisect_tol = 1e-3;
  void validate() const;  // throws std::invalid_argument unless all positive
};

struct AttackResult {
  cx z = 0.0;                // final point
  double perturbation = 0.0; // |z - z0|
  bool success = false;      // sign(Re f(z)) != t, with Re f = 0 an error
  bool stalled = false;      // f' vanished along the entire path
  int iterations = 0;
};

// Iterates z <- clip(z - eta t conj(f'(z))) until misclassification or the
// iteration budget runs out. clip projects onto the feature domain (closed
// disk or [0,1]) intersected with the epsilon-ball around z0.
AttackResult gradient_attack(const Hypothesis& h, cx z0, double t,
                             const AttackConfig& cfg,
                             double epsilon = std::numeric_limits<double>::infinity());

struct FlipRadius {
  double radius = 0.0;
  bool capped = false;  // attack failed even at eps_max
};

// Smallest epsilon <= eps_max whose budgeted attack succeeds, by bisection
// to cfg.bisect_tol; returns eps_max with capped=true on total failure.
FlipRadius min_flip_radius(const Hypothesis& h, cx z0, double t,
                           const AttackConfig& cfg);

struct Crossings {
  int count = 0;
  std::vector<double> angles;  // refined roots of Re f(e^{i theta})
};

// Sign changes of theta -> Re f(e^{i theta}) over [0, 2pi) sampled at
// n_angles half-offset angles, each refined by the secant rule.
Crossings boundary_crossings(const Hypothesis& h, int n_angles);

struct TransferReport {
  double grad_norm_target = 0.0;       // mean ||grad loss_target||
  double grad_cosine_distance = 0.0;   // mean 1 - cos(angle), C as R^2
  double loss_variance_surrogate = 0.0;
  double transfer_rate = 0.0;  // of surrogate-successful attacks, fraction
                               // that also flip the target
  int surrogate_successes = 0;
  int points = 0;
};

// Hinge surrogate loss l = max(0, 1 - t Re f). Points where either gradient
// vanishes are excluded from the cosine average; throws std::runtime_error
// if every point is excluded.
TransferReport transfer_metrics(const TrainedModel& target,
                                const TrainedModel& surrogate,
                                const std::vector<LabeledSample>& eval_points,
                                const AttackConfig& cfg);

struct NormalityReport {
  std::vector<int> ns;
  std::vector<double> sup_deviation;
  std::string reference;
};

enum class ProbeMode {
  vs_reference,  // sup |f_n - f_ref| against the reference-n model
  vs_labeler     // sup |f_n - t| against the labeling function
};

// Trains rule(n) for each n in the schedule and evaluates sup-deviations
// over the grid. The schedule must be strictly increasing and, in reference
// mode, bounded by reference_n.
NormalityReport normality_probe(const std::function<Hypothesis(int)>& rule,
                                const std::vector<int>& n_schedule,
                                int reference_n, const std::vector<cx>& grid,
                                ProbeMode mode = ProbeMode::vs_reference,
                                const std::function<double(cx)>& labeler = {});

// Square lattice over [-radius, radius]^2 restricted to |z| <= radius.
std::vector<cx> disk_eval_grid(int per_axis = 64, double radius = 0.95);

std::string normality_to_csv(const NormalityReport& rep);
std::string transfer_to_csv(const TransferReport& rep);

}  // namespace holo
