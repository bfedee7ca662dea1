// Acceptance gate: twelve end-to-end checks of the library's headline
// properties, each printing a single PASS/FAIL line. Expected values come
// from closed forms or independent constructions, never from the code under
// test. Exit status is the number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "holo/bergman.hpp"
#include "holo/core.hpp"
#include "holo/features.hpp"
#include "holo/learner.hpp"
#include "holo/pde.hpp"
#include "holo/pipelines.hpp"
#include "holo/qp.hpp"
#include "holo/quadrature.hpp"
#include "holo/robustness.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using holo::cx;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;  // printed after the verdict line
};

std::string scratch(const std::string& leaf) {
  fs::path p = fs::temp_directory_path() / "holo_acceptance" / leaf;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p.string();
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

// ---------------------------------------------------------------- 1
Outcome basis_orthonormality() {
  holo::MonomialBasis basis(30);
  holo::QuadratureRule disk = holo::disk_rule();
  std::vector<cx> vals(30);
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(30, 30);
  for (std::size_t q = 0; q < disk.nodes.size(); ++q) {
    basis.eval(disk.nodes[q], vals.data());
    for (int j = 0; j < 30; ++j)
      for (int k = 0; k < 30; ++k)
        gram(j, k) += disk.weights[q] * vals[j] * std::conj(vals[k]);
  }
  double worst = 0.0;
  for (int j = 0; j < 30; ++j)
    for (int k = 0; k < 30; ++k) {
      double target = j == k ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(gram(j, k) - cx(target)));
    }
  return {worst <= 1e-6, "max |Gram - I| = " + num(worst), {}};
}

// ---------------------------------------------------------------- 2
Outcome tuning_matrix_closed_form() {
  holo::MonomialBasis basis(30);
  Eigen::MatrixXd sigma = holo::tuning_matrix(basis, holo::disk_rule());
  double worst_diag = 0.0, worst_off = 0.0;
  for (int k = 0; k < 30; ++k) {
    double expect = static_cast<double>(k) * (k + 1);
    double err = std::abs(sigma(k, k) - expect);
    if (expect > 0.0) err /= expect;
    worst_diag = std::max(worst_diag, err);
    for (int j = 0; j < 30; ++j)
      if (j != k) worst_off = std::max(worst_off, std::abs(sigma(j, k)));
  }
  bool pass = worst_diag <= 1e-6 && worst_off <= 1e-8;
  return {pass,
          "diag rel err " + num(worst_diag) + ", max off-diag " + num(worst_off),
          {}};
}

// ---------------------------------------------------------------- 3
Outcome energy_norm_identity() {
  auto harmonic = holo::harmonic_transform(
      std::make_shared<holo::MonomialBasis>(30), holo::disk_rule());
  holo::QuadratureRule disk = holo::disk_rule();
  holo::Rng rng(3);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXcd a(30);
    a(0) = 0.0;  // the constant carries no gradient
    for (int k = 1; k < 30; ++k) a(k) = cx(rng.normal(), rng.normal());
    holo::Hypothesis h{harmonic, a};
    double energy = holo::dirichlet_energy(h, disk);
    double norm_sq = a.squaredNorm();
    double gap = std::abs(energy - norm_sq) / (1.0 + norm_sq);
    worst = std::max(worst, gap);
  }
  return {worst <= 1e-4, "max scaled |E[f] - ||a||^2| = " + num(worst), {}};
}

// ---------------------------------------------------------------- 4
Outcome bayes_coefficients_and_growth() {
  holo::QuadratureRule circle =
      holo::circle_rule_split({holo::kPi / 2, 3 * holo::kPi / 2}, 64);
  auto labeler = [](cx z) { return holo::sign0(z.real()); };
  holo::BayesProjection bayes = holo::holomorphic_bayes_szego(labeler, 30, circle);
  double worst = 0.0;
  for (int k = 0; k < 30; ++k) {
    cx expect(0.0);
    if (k % 2 == 1)
      expect = cx((2.0 / holo::kPi) * (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0) / k);
    worst = std::max(worst, std::abs(bayes.monomial_coeffs(k) - expect));
  }
  // near the branch points at +-i the truncated classifier must leave the
  // label range; resolving z^511 moments needs the finer per-arc rule
  holo::QuadratureRule fine =
      holo::circle_rule_split({holo::kPi / 2, 3 * holo::kPi / 2}, 1024);
  holo::BayesProjection deep = holo::holomorphic_bayes_szego(labeler, 512, fine);
  double growth = std::abs(deep.hypothesis(cx(0.0, 0.999)));
  bool pass = worst <= 1e-6 && growth > 1.5;
  return {pass,
          "max coeff err " + num(worst) + ", |o(0.999i)| = " + num(growth) +
              " at K=512",
          {}};
}

// ---------------------------------------------------------------- 5
holo::QPProblem random_feasible_qp(holo::Rng& rng) {
  int n = 1 + static_cast<int>(rng.u01() * 6);
  int m = 1 + static_cast<int>(rng.u01() * 10);
  if (n > 6) n = 6;
  if (m > 10) m = 10;
  Eigen::MatrixXd B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = rng.normal();
  holo::QPProblem p;
  p.Q = B.transpose() * B + 0.1 * Eigen::MatrixXd::Identity(n, n);
  p.c = Eigen::VectorXd::NullaryExpr(n, [&](Eigen::Index) { return rng.normal(); });
  p.A = Eigen::MatrixXd::NullaryExpr(
      m, n, [&](Eigen::Index, Eigen::Index) { return rng.normal(); });
  Eigen::VectorXd x0 =
      Eigen::VectorXd::NullaryExpr(n, [&](Eigen::Index) { return rng.normal(); });
  Eigen::VectorXd margin = Eigen::VectorXd::NullaryExpr(
      m, [&](Eigen::Index) { return 0.1 + rng.u01(); });
  p.b = p.A * x0 - margin;
  return p;
}

Outcome qp_correctness() {
  holo::Rng rng(5);
  double worst = 0.0;
  int non_optimal = 0;
  for (int trial = 0; trial < 200; ++trial) {
    holo::QPProblem p = random_feasible_qp(rng);
    holo::QPSolution ipm = holo::solve_qp(p);
    holo::QPSolution ref = holo::brute_force_qp(p);
    if (ipm.status != holo::QPStatus::optimal ||
        ref.status != holo::QPStatus::optimal) {
      ++non_optimal;
      continue;
    }
    worst = std::max(worst, std::abs(ipm.objective - ref.objective) /
                                (1.0 + std::abs(ref.objective)));
  }
  holo::TrainConfig tc;
  tc.C = 1e8;
  tc.K = 2;
  holo::TrainedModel pair = holo::train_complex_svc(holo::make_circle_dataset(2), tc);
  double a1_err = std::abs(pair.hypothesis.coeffs(1) - cx(std::sqrt(holo::kPi / 2)));
  bool pass = non_optimal == 0 && worst <= 1e-6 && a1_err <= 1e-6;
  return {pass,
          "200 instances, max objective gap " + num(worst) + ", non-optimal " +
              std::to_string(non_optimal) + ", |a1 - sqrt(pi/2)| = " + num(a1_err),
          {}};
}

// ---------------------------------------------------------------- 6
Outcome dual_reconstruction_consistency() {
  struct Instance {
    int n, K;
    double C;
  };
  const Instance instances[] = {{2, 2, 1e8}, {16, 6, 10.0}, {16, 4, 100.0}};
  double worst = 0.0;
  for (const Instance& inst : instances) {
    holo::Dataset data = holo::make_interval_dataset(inst.n);
    holo::TrainConfig tc;
    tc.C = inst.C;
    tc.K = inst.K;
    holo::TrainedModel m =
        holo::train_real_svc(data, holo::legendre_interval_basis(inst.K), tc);
    Eigen::VectorXd w = holo::dual_reconstruction(m, data);
    double err = (w - m.hypothesis.coeffs.real()).cwiseAbs().maxCoeff();
    worst = std::max(worst, err);
  }
  return {worst <= 1e-5,
          "max |primal - dual reconstruction| = " + num(worst) +
              " over 3 instances",
          {}};
}

// ---------------------------------------------------------------- 7
Outcome robust_vs_nonrobust_figure() {
  auto run_at = [](double C, const std::string& leaf) {
    holo::ExperimentConfig cfg = holo::parse_experiment_config(
        json{{"experiment", "fig1"}, {"C", C}, {"output_dir", scratch(leaf)}});
    return holo::run_fig1(cfg);
  };
  holo::BundleResult r = run_at(10.0, "fig1_c10");
  if (r.dir.empty())
    return {false, "experiment aborted: " + r.failure, {}};

  auto col = [&r](const std::string& name, const std::string& key) {
    return r.metrics["columns"][name][key].get<double>();
  };
  int cr_ro = static_cast<int>(col("robust", "crossings"));
  int cr_nr = static_cast<int>(col("nonrobust", "crossings"));
  double med_ro = col("robust", "median_flip_radius");
  double med_nr = col("nonrobust", "median_flip_radius");
  double en_ro = col("robust", "dirichlet_energy");
  double en_nr = col("nonrobust", "dirichlet_energy");
  double len_ro = col("robust", "curve_length");
  double len_nr = col("nonrobust", "curve_length");

  bool c1 = cr_ro == 2;
  bool c2 = cr_nr > 2;
  bool c3 = med_ro >= 3.0 * med_nr;
  bool c4 = en_ro < en_nr;
  bool c5 = len_ro < len_nr;
  Outcome o;
  o.pass = c1 && c2 && c3 && c4 && c5;
  o.detail = "C=10: crossings " + std::to_string(cr_ro) + "/" +
             std::to_string(cr_nr) + " (robust/nonrobust), flip medians " +
             num(med_ro) + "/" + num(med_nr) + ", energies " + num(en_ro) +
             "/" + num(en_nr) + ", lengths " + num(len_ro) + "/" + num(len_nr);
  if (!o.pass) {
    o.notes.push_back(
        "with 30 samples and 30 features the margin program interpolates: all "
        "constraints are active, the solution is determined by the data alone, "
        "and both learners return the same hypothesis, so the orderings cannot "
        "separate at C=10");
    holo::BundleResult soft = run_at(1.0, "fig1_c1");
    if (!soft.dir.empty()) {
      auto scol = [&soft](const std::string& name, const std::string& key) {
        return soft.metrics["columns"][name][key].get<double>();
      };
      double smed_ro = scol("robust", "median_flip_radius");
      double smed_nr = scol("nonrobust", "median_flip_radius");
      o.notes.push_back(
          "supplementary, not part of the verdict: at the experiment default "
          "C=1 crossings are " +
          std::to_string(static_cast<int>(scol("robust", "crossings"))) + "/" +
          std::to_string(static_cast<int>(scol("nonrobust", "crossings"))) +
          " (robust/nonrobust), energies " +
          num(scol("robust", "dirichlet_energy")) + " < " +
          num(scol("nonrobust", "dirichlet_energy")) + ", lengths " +
          num(scol("robust", "curve_length")) + " < " +
          num(scol("nonrobust", "curve_length")) + ", flip medians " +
          num(smed_ro) + " vs " + num(smed_nr) +
          (smed_ro >= 3.0 * smed_nr
               ? " (meets the 3x margin)"
               : " (robust above nonrobust, short of the 3x margin: the "
                 "budgeted attack with fixed step 0.05 overshoots the thin "
                 "sign lobes of the oscillatory hypothesis, which inflates "
                 "its measured flip radii)"));
    }
  }
  return o;
}

// ---------------------------------------------------------------- 8
Outcome potential_equation_residual() {
  holo::ExperimentConfig cfg = holo::parse_experiment_config(
      json{{"experiment", "pde_check"}, {"output_dir", scratch("pde")}});
  holo::BundleResult r = holo::run_pde_check(cfg);
  if (r.dir.empty()) return {false, "experiment aborted: " + r.failure, {}};
  double res = r.metrics["indicator"]["max_rel_residual"].get<double>();
  double order_ind = r.metrics["indicator"]["order"].get<double>();
  double order_smooth = r.metrics["smooth"]["order"].get<double>();
  // the centered-difference theory rate shows on the smooth density; the
  // indicator's symmetry gives it a superquadratic measured rate
  bool pass = r.ok && res <= 5e-2 && order_ind >= 1.8 &&
              order_smooth >= 1.8 && order_smooth <= 2.2;
  return {pass,
          "129^2 max rel residual " + num(res) + ", refinement order " +
              num(order_ind) + " (indicator), " + num(order_smooth) +
              " (smooth density)",
          {}};
}

// ---------------------------------------------------------------- 9
Outcome rectangle_eigen_identities() {
  auto cos_x = [] {
    holo::SmoothActivation s;
    s.value = [](double x, double) { return std::cos(x); };
    s.dx = [](double x, double) { return -std::sin(x); };
    s.dy = [](double, double) { return 0.0; };
    s.minus_laplacian = [](double x, double) { return std::cos(x); };
    s.descriptor = "cos x";
    return s;
  }();
  auto cos_y = [] {
    holo::SmoothActivation s;
    s.value = [](double, double y) { return std::cos(y); };
    s.dx = [](double, double) { return 0.0; };
    s.dy = [](double, double y) { return -std::sin(y); };
    s.minus_laplacian = [](double, double y) { return std::cos(y); };
    s.descriptor = "cos y";
    return s;
  }();
  auto cos_2x = [] {
    holo::SmoothActivation s;
    s.value = [](double x, double) { return std::cos(2 * x); };
    s.dx = [](double x, double) { return -2 * std::sin(2 * x); };
    s.dy = [](double, double) { return 0.0; };
    s.minus_laplacian = [](double x, double) { return 4 * std::cos(2 * x); };
    s.descriptor = "cos 2x";
    return s;
  }();

  const double pi = holo::kPi;
  Eigen::VectorXd a2(1), a11(2);
  a2 << 2.0;
  a11 << 1.0, 1.0;

  holo::HarmonicActivationReport single =
      holo::harmonic_activation_check({cos_x}, a2, 0, pi, 0, pi);
  holo::HarmonicActivationReport mixed =
      holo::harmonic_activation_check({cos_x, cos_y}, a11, 0, pi, 0, pi);
  Eigen::VectorXd a1(1);
  a1 << 1.0;
  holo::HarmonicActivationReport control =
      holo::harmonic_activation_check({cos_2x}, a1, 0, pi, 0, pi);

  double rel_single =
      std::abs(single.norm_sq - single.energy) / std::abs(single.norm_sq);
  double rel_mixed =
      std::abs(mixed.norm_sq - mixed.energy) / std::abs(mixed.norm_sq);
  double div_gap = std::max(single.max_identity_gap, mixed.max_identity_gap);
  div_gap = std::max(div_gap, control.max_identity_gap);
  double control_violation =
      std::abs(control.energy - control.norm_sq) / control.norm_sq;

  bool pass = single.eigen_case && mixed.eigen_case && rel_single <= 1e-6 &&
              rel_mixed <= 1e-6 && div_gap <= 1e-5 && !control.eigen_case &&
              control_violation > 0.1;
  return {pass,
          "eigen rel gaps " + num(rel_single) + " / " + num(rel_mixed) +
              ", divergence identity gap " + num(div_gap) +
              ", non-eigen control violates by " + num(control_violation),
          {}};
}

// ---------------------------------------------------------------- 10
Outcome normality_probe_orderings() {
  std::vector<cx> grid = holo::disk_eval_grid(64, 0.95);
  auto rule = [](int n) {
    holo::TrainConfig tc;
    tc.C = 10.0;
    tc.K = 15;
    return holo::train_complex_svc(holo::make_circle_dataset(n), tc).hypothesis;
  };
  holo::NormalityReport rep =
      holo::normality_probe(rule, {20, 40, 80}, 320, grid);
  bool decreasing = true;
  for (std::size_t i = 1; i < rep.sup_deviation.size(); ++i)
    decreasing = decreasing && rep.sup_deviation[i] < rep.sup_deviation[i - 1];

  auto labeler = [](cx z) { return holo::sign0(z.real()); };
  auto mem_rule = [](int n) {
    holo::Dataset d = holo::make_circle_dataset(n);
    std::vector<cx> anchors;
    for (const auto& s : d.samples) anchors.push_back(s.z);
    double min_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < anchors.size(); ++i)
      for (std::size_t j = i + 1; j < anchors.size(); ++j)
        min_dist = std::min(min_dist, std::abs(anchors[i] - anchors[j]));
    auto dirac = std::make_shared<holo::DiracBasis>(
        holo::FeatureDomain::unit_disk, anchors, 0.5 * min_dist);
    holo::TrainConfig tc;
    tc.C = 1e8;
    tc.K = static_cast<int>(anchors.size());
    return holo::train_real_svc(d, dirac, tc).hypothesis;
  };
  holo::NormalityReport mem = holo::normality_probe(
      mem_rule, {20}, 20, grid, holo::ProbeMode::vs_labeler, labeler);

  bool pass = decreasing && mem.sup_deviation[0] >= 1.0 - 1e-9;
  std::string sups;
  for (std::size_t i = 0; i < rep.ns.size(); ++i)
    sups += (i ? " > " : "") + num(rep.sup_deviation[i]);
  return {pass,
          "sup deviations " + sups + " vs n=320 reference" +
              (decreasing ? " (decreasing)" : " (NOT decreasing)") +
              ", memorizer sup " + num(mem.sup_deviation[0]),
          {}};
}

// ---------------------------------------------------------------- 11
Outcome transfer_orderings() {
  holo::ExperimentConfig cfg = holo::parse_experiment_config(
      json{{"experiment", "transfer"}, {"output_dir", scratch("transfer")}});
  holo::BundleResult r = holo::run_transfer(cfg);
  if (r.dir.empty()) return {false, "experiment aborted: " + r.failure, {}};
  auto finite = [&r](const std::string& target) {
    for (const char* key : {"grad_norm_target", "grad_cosine_distance",
                            "loss_variance_surrogate", "transfer_rate"})
      if (!std::isfinite(r.metrics[target][key].get<double>())) return false;
    return true;
  };
  double rate_nr = r.metrics["nonrobust_target"]["transfer_rate"].get<double>();
  double rate_ro = r.metrics["robust_target"]["transfer_rate"].get<double>();
  bool pass = r.ok && rate_nr > rate_ro && finite("nonrobust_target") &&
              finite("robust_target");
  return {pass,
          "transfer rates " + num(rate_nr) + " (nonrobust) vs " + num(rate_ro) +
              " (robust), metrics finite",
          {}};
}

// ---------------------------------------------------------------- 12
Outcome rerun_determinism() {
  const json configs[] = {
      {{"experiment", "fig1"}, {"n", 12}, {"K", 8}, {"C", 1.0},
       {"n_angles", 512}, {"probes", 32}, {"image_size", 128},
       {"attack_iterations", 120}},
      {{"experiment", "fig2"}},
      {{"experiment", "pde_check"}, {"resolution", 65},
       {"refined_resolution", 129}},
      {{"experiment", "transfer"}},
      {{"experiment", "normality"}, {"K", 6}, {"schedule", json::array({8, 16})},
       {"reference_n", 48}, {"grid_per_axis", 24}, {"memorizer_n", 8}},
  };
  int files = 0;
  for (json j : configs) {
    std::string id = j["experiment"];
    j["output_dir"] = scratch("rerun_" + id);
    holo::ExperimentConfig cfg = holo::parse_experiment_config(j);

    holo::BundleResult first = holo::run_experiment(cfg);
    if (first.dir.empty())
      return {false, id + " aborted: " + first.failure, {}};
    std::map<std::string, std::string> tree;
    for (const auto& e : fs::recursive_directory_iterator(first.dir))
      if (e.is_regular_file())
        tree[fs::relative(e.path(), first.dir).string()] =
            holo::read_file(e.path().string());

    holo::BundleResult second = holo::run_experiment(cfg);
    if (second.dir.empty())
      return {false, id + " rerun aborted: " + second.failure, {}};
    std::map<std::string, std::string> tree2;
    for (const auto& e : fs::recursive_directory_iterator(second.dir))
      if (e.is_regular_file())
        tree2[fs::relative(e.path(), second.dir).string()] =
            holo::read_file(e.path().string());

    if (tree.size() != tree2.size())
      return {false, id + ": bundle file sets differ between reruns", {}};
    for (const auto& [name, bytes] : tree) {
      auto it = tree2.find(name);
      if (it == tree2.end() || it->second != bytes)
        return {false, id + ": artifact " + name + " differs between reruns", {}};
    }
    files += static_cast<int>(tree.size());
  }
  return {true,
          "5 experiments rerun byte-identically (" + std::to_string(files) +
              " artifacts compared)",
          {}};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "basis orthonormality", basis_orthonormality},
      {2, "tuning matrix closed form", tuning_matrix_closed_form},
      {3, "energy equals squared norm on harmonic features", energy_norm_identity},
      {4, "holomorphic Bayes coefficients and growth", bayes_coefficients_and_growth},
      {5, "QP solver correctness", qp_correctness},
      {6, "dual reconstruction", dual_reconstruction_consistency},
      {7, "robust vs nonrobust disk figure", robust_vs_nonrobust_figure},
      {8, "potential equation residual", potential_equation_residual},
      {9, "rectangle eigen-activation identities", rectangle_eigen_identities},
      {10, "normality probe orderings", normality_probe_orderings},
      {11, "attack transferability orderings", transfer_orderings},
      {12, "rerun determinism", rerun_determinism},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0, ran = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), c.id) == selected.end())
      continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what(), {}};
    }
    std::cout << "criterion " << c.id << " (" << c.name << "): "
              << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << "\n";
    for (const std::string& note : o.notes)
      std::cout << "    " << note << "\n";
    if (!o.pass) ++failures;
  }
  std::cout << (ran - failures) << " of " << ran << " criteria passed\n";
  return failures;
}
