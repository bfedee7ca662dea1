#include "holo/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>

#include "holo/bergman.hpp"
#include "holo/core.hpp"
#include "holo/features.hpp"
#include "holo/learner.hpp"
#include "holo/pde.hpp"
#include "holo/quadrature.hpp"
#include "holo/render.hpp"
#include "holo/robustness.hpp"

namespace holo {

namespace fs = std::filesystem;
using nlohmann::json;

std::string output_root() {
  const char* env = std::getenv("HOLO_OUTPUT_ROOT");
  return env && *env ? env : "out";
}

json experiment_defaults(const std::string& id) {
  if (id == "fig1")
    return {{"n", 30},       {"K", 30},
            {"C", 1.0},      {"n_angles", 4096},
            {"probes", 256}, {"eta", 0.05},
            {"attack_iterations", 400}, {"eps_max", 2.0},
            {"bisect_tol", 1e-3}, {"image_size", 512}};
  if (id == "fig2")
    return {{"n", 16},  {"K", 30},
            {"C", 10.0}, {"grid_points", 513},
            {"eta", 0.02}, {"attack_iterations", 400},
            {"eps_max", 1.0}, {"bisect_tol", 1e-3},
            {"image_width", 640}, {"image_height", 400}};
  if (id == "pde_check")
    return {{"resolution", 129}, {"refined_resolution", 257},
            {"half_width", 1.1}, {"mask_radius", 0.95},
            {"tolerance", 5e-2}};
  if (id == "transfer")
    return {{"n", 16},          {"K_surrogate", 12},
            {"K_target", 30},   {"C", 10.0},
            {"probes", 64},     {"eps", 0.1},
            {"eta", 0.02},      {"attack_iterations", 400},
            {"bisect_tol", 1e-3}};
  if (id == "normality")
    return {{"K", 15},       {"C", 10.0},
            {"schedule", json::array({20, 40, 80})}, {"reference_n", 320},
            {"grid_per_axis", 64}, {"grid_radius", 0.95},
            {"memorizer_n", 20}};
  throw std::invalid_argument("unknown experiment id: " + id);
}

ExperimentConfig parse_experiment_config(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: not an object");
  if (!j.contains("experiment") || !j["experiment"].is_string())
    throw std::invalid_argument("config: missing experiment id");
  ExperimentConfig cfg;
  cfg.id = j["experiment"].get<std::string>();
  json defaults = experiment_defaults(cfg.id);
  cfg.params = defaults;
  cfg.output_dir = output_root() + "/" + cfg.id;

  for (const auto& [key, value] : j.items()) {
    if (key == "experiment") continue;
    if (key == "output_dir") {
      if (!value.is_string()) throw std::invalid_argument("config: output_dir type");
      cfg.output_dir = value.get<std::string>();
      continue;
    }
    if (key == "seed") {
      if (!value.is_number_integer()) throw std::invalid_argument("config: seed type");
      cfg.seed = value.get<long>();
      continue;
    }
    if (!defaults.contains(key))
      throw std::invalid_argument("config: unknown key '" + key + "' for " + cfg.id);
    const json& d = defaults[key];
    bool ok = (d.is_number_integer() && value.is_number_integer()) ||
              (d.is_number_float() && value.is_number()) ||
              (d.is_array() && value.is_array()) ||
              (d.is_string() && value.is_string()) ||
              (d.is_boolean() && value.is_boolean());
    if (!ok) throw std::invalid_argument("config: bad type for '" + key + "'");
    cfg.params[key] = value;
  }
  return cfg;
}

namespace {

// Collects artifacts in <dir>.tmp, then swaps the finished bundle into place.
class Bundle {
 public:
  explicit Bundle(std::string dir) : dir_(std::move(dir)), tmp_(dir_ + ".tmp") {
    fs::remove_all(tmp_);
    fs::create_directories(tmp_);
  }
  ~Bundle() {
    if (!finalized_) fs::remove_all(tmp_);
  }
  void add(const std::string& name, const std::string& content) {
    write_file_atomic(tmp_ + "/" + name, content);
  }
  std::string add_png(const std::string& experiment, const std::string& style,
                      const Canvas& c) {
    std::string bytes = encode_png(c);
    std::uint64_t h = fnv1a(bytes.data(), bytes.size());
    char hex[16];
    std::snprintf(hex, sizeof hex, "%08x",
                  static_cast<unsigned>((h >> 32) ^ (h & 0xffffffffu)));
    std::string name = experiment + "_" + style + "_" + hex + ".png";
    add(name, bytes);
    return name;
  }
  void finalize() {
    fs::remove_all(dir_);
    fs::rename(tmp_, dir_);
    finalized_ = true;
  }
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_, tmp_;
  bool finalized_ = false;
};

struct Assertions {
  json list = json::array();
  bool ok = true;
  void check(const std::string& name, bool pass) {
    list.push_back({{"assertion", name}, {"pass", pass}});
    ok = ok && pass;
  }
};

json config_echo(const ExperimentConfig& cfg) {
  json e = cfg.params;
  e["experiment"] = cfg.id;
  e["seed"] = cfg.seed;
  e["output_dir"] = cfg.output_dir;
  return e;
}

BundleResult finish(const ExperimentConfig& cfg, Bundle& bundle, json metrics,
                    const Assertions& asserts) {
  metrics["config"] = config_echo(cfg);
  metrics["assertions"] = asserts.list;
  bundle.add("metrics.json", metrics.dump(2) + "\n");
  bundle.add("config.json", config_echo(cfg).dump(2) + "\n");
  bundle.finalize();
  BundleResult r;
  r.ok = asserts.ok;
  r.dir = bundle.dir();
  r.metrics = std::move(metrics);
  if (!r.ok) {
    json fails = json::array();
    for (const auto& a : r.metrics["assertions"])
      if (!a["pass"].get<bool>()) fails.push_back(a["assertion"]);
    r.failure = json{{"experiment", cfg.id},
                     {"error", "stage assertions failed"},
                     {"failed_assertions", fails}}
                    .dump();
  }
  return r;
}

BundleResult fail(const ExperimentConfig& cfg, const std::string& stage,
                  const std::string& what) {
  BundleResult r;
  r.ok = false;
  r.failure =
      json{{"experiment", cfg.id}, {"stage", stage}, {"error", what}}.dump();
  return r;
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty set");
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

AttackConfig attack_from_params(const json& p, double eps_key_value) {
  AttackConfig ac;
  ac.eta = p["eta"].get<double>();
  ac.max_iterations = p["attack_iterations"].get<int>();
  ac.eps_max = eps_key_value;
  ac.bisect_tol = p["bisect_tol"].get<double>();
  return ac;
}

}  // namespace

BundleResult run_fig1(const ExperimentConfig& cfg) {
  std::string stage = "setup";
  try {
    const json& P = cfg.params;
    const int n = P["n"], K = P["K"], n_angles = P["n_angles"];
    const int probes = P["probes"], image = P["image_size"];
    const double C = P["C"];
    AttackConfig ac = attack_from_params(P, P["eps_max"].get<double>());

    Bundle bundle(cfg.output_dir);
    Assertions asserts;
    json metrics;

    stage = "dataset";
    Dataset data = make_circle_dataset(n);

    stage = "bayes_projection";
    auto labeler = [](cx z) { return sign0(z.real()); };
    QuadratureRule circle = circle_rule_split({kPi / 2, 3 * kPi / 2}, 64);
    BayesProjection bayes = holomorphic_bayes_szego(labeler, K, circle);

    stage = "train";
    TrainConfig tc;
    tc.C = C;
    tc.K = K;
    tc.kind = FeatureKind::orthonormal;
    TrainedModel nonrobust = train_complex_svc(data, tc);
    TrainedModel robust = train_robust(data, tc);
    bundle.add("fig1_model_nonrobust.csv", model_to_csv(nonrobust));
    bundle.add("fig1_model_nonrobust.json", model_to_json(nonrobust));
    bundle.add("fig1_model_robust.csv", model_to_csv(robust));
    bundle.add("fig1_model_robust.json", model_to_json(robust));

    QuadratureRule disk = disk_rule();
    RenderConfig rc;
    rc.size = image;

    struct Column {
      std::string name;
      const Hypothesis* h;
    };
    const Column columns[] = {{"bayes", &bayes.hypothesis},
                              {"nonrobust", &nonrobust.hypothesis},
                              {"robust", &robust.hypothesis}};
    json per_column;
    int crossings_nonrobust = 0, crossings_robust = 0;
    for (const Column& col : columns) {
      stage = "render_" + col.name;
      const Hypothesis& h = *col.h;
      DomainColoring dc = render_domain_coloring(h, rc);
      bundle.add_png("fig1", "domain_" + col.name, dc.image);
      CurveData prof = circle_profile_data(h, n_angles);
      bundle.add("fig1_profiles_" + col.name + ".csv", curve_to_csv(prof));
      bundle.add_png("fig1", "profiles_" + col.name,
                     render_circle_profiles(prof));
      RangeCurve rcv = range_curve(h, n_angles);
      bundle.add_png("fig1", "range_" + col.name, render_range_curve(rcv));

      stage = "measure_" + col.name;
      Crossings cr = boundary_crossings(h, n_angles);
      double energy = dirichlet_energy(h, disk);
      std::vector<double> radii;
      int capped = 0;
      for (int i = 0; i < probes; ++i) {
        double th = 2.0 * kPi * (i + 0.5) / probes;
        cx z0 = std::polar(1.0, th);
        FlipRadius fr = min_flip_radius(h, z0, sign0(z0.real()), ac);
        radii.push_back(fr.radius);
        capped += fr.capped ? 1 : 0;
      }
      per_column[col.name] = {
          {"crossings", cr.count},
          {"curve_length", rcv.length},
          {"dirichlet_energy", energy},
          {"median_flip_radius", median(radii)},
          {"capped_probes", capped},
          {"non_finite_pixels", dc.non_finite_pixels}};
      if (col.name == "nonrobust") crossings_nonrobust = cr.count;
      if (col.name == "robust") crossings_robust = cr.count;
    }
    metrics["columns"] = per_column;

    stage = "assertions";
    asserts.check("crossings_robust_equals_2", crossings_robust == 2);
    asserts.check("crossings_nonrobust_above_2", crossings_nonrobust > 2);
    return finish(cfg, bundle, std::move(metrics), asserts);
  } catch (const std::exception& e) {
    return fail(cfg, stage, e.what());
  }
}

BundleResult run_fig2(const ExperimentConfig& cfg) {
  std::string stage = "setup";
  try {
    const json& P = cfg.params;
    const int n = P["n"], K = P["K"], grid_points = P["grid_points"];
    const double C = P["C"];
    AttackConfig ac = attack_from_params(P, P["eps_max"].get<double>());

    Bundle bundle(cfg.output_dir);
    Assertions asserts;
    json metrics;

    stage = "dataset";
    Dataset data = make_interval_dataset(n);

    stage = "features";
    auto ann = project_relu_activation(K);
    auto ann_h = project_relu_activation_harmonic(K);
    bundle.add("fig2_features_ann.csv", ann->to_csv());
    bundle.add("fig2_features_ann_harmonic.csv", ann_h->to_csv());

    stage = "train";
    TrainConfig tc;
    tc.C = C;
    tc.K = K;
    tc.kind = FeatureKind::ann_projected;
    TrainedModel nonrobust = train_complex_svc(data, tc);
    TrainedModel robust = train_robust(data, tc);
    bundle.add("fig2_model_nonrobust.csv", model_to_csv(nonrobust));
    bundle.add("fig2_model_nonrobust.json", model_to_json(nonrobust));
    bundle.add("fig2_model_robust.csv", model_to_csv(robust));
    bundle.add("fig2_model_robust.json", model_to_json(robust));

    struct Column {
      std::string name;
      const TrainedModel* m;
    };
    const Column columns[] = {{"nonrobust", &nonrobust}, {"robust", &robust}};
    json per_column;
    std::vector<double> flip_nr, flip_ro;
    for (const Column& col : columns) {
      stage = "render_" + col.name;
      const Hypothesis& h = col.m->hypothesis;
      CurveData curve;
      curve.cyclic = false;
      for (int i = 0; i < grid_points; ++i) {
        double x = static_cast<double>(i) / (grid_points - 1);
        curve.theta.push_back(x);
        curve.values.push_back(h(cx(x, 0.0)));
      }
      bundle.add("fig2_interval_" + col.name + ".csv", curve_to_csv(curve));
      bundle.add_png("fig2", "interval_" + col.name,
                     render_circle_profiles(curve, P["image_width"],
                                            P["image_height"], data.samples));

      stage = "measure_" + col.name;
      double margin = std::numeric_limits<double>::infinity();
      double max_imag = 0.0;
      std::vector<double>& flips = col.name == "nonrobust" ? flip_nr : flip_ro;
      for (const auto& s : data.samples) {
        cx f = h(s.z);
        margin = std::min(margin, s.t * f.real());
        max_imag = std::max(max_imag, std::abs(f.imag()));
        flips.push_back(min_flip_radius(h, s.z, s.t, ac).radius);
      }
      per_column[col.name] = {{"min_margin", margin},
                              {"max_abs_imag_at_samples", max_imag},
                              {"objective", col.m->qp.objective},
                              {"training_loss", col.m->training_loss()}};
    }

    json flips = json::array();
    bool robust_ge = true;
    for (int i = 0; i < n; ++i) {
      robust_ge = robust_ge && flip_ro[i] >= flip_nr[i] - 1e-12;
      flips.push_back({{"x", data.samples[i].z.real()},
                       {"t", data.samples[i].t},
                       {"flip_nonrobust", flip_nr[i]},
                       {"flip_robust", flip_ro[i]}});
    }
    metrics["columns"] = per_column;
    metrics["flip_distances"] = flips;
    // reported observation; the margin remark means it is not asserted
    metrics["observed_robust_flip_ge_nonrobust_everywhere"] = robust_ge;
    metrics["observed_median_flip_nonrobust"] = median(flip_nr);
    metrics["observed_median_flip_robust"] = median(flip_ro);

    stage = "assertions";
    asserts.check("both_models_trained",
                  nonrobust.qp.status == QPStatus::optimal &&
                      robust.qp.status == QPStatus::optimal);
    return finish(cfg, bundle, std::move(metrics), asserts);
  } catch (const std::exception& e) {
    return fail(cfg, stage, e.what());
  }
}

BundleResult run_pde_check(const ExperimentConfig& cfg) {
  std::string stage = "setup";
  try {
    const json& P = cfg.params;
    const int res = P["resolution"], res2 = P["refined_resolution"];
    const double hw = P["half_width"], mask_r = P["mask_radius"];
    const double tol = P["tolerance"];

    Bundle bundle(cfg.output_dir);
    Assertions asserts;
    json metrics;

    Eigen::VectorXd lam(1), lab(1);
    lam << 1.0;
    lab << 1.0;
    std::vector<double> xs = {0.0};
    auto mask = [mask_r](double x, double y) { return std::hypot(x, y) <= mask_r; };

    auto residual_for = [&](const ActivationFamily& fam, int r) {
      GridField grid = make_grid(-hw, hw, -hw, hw, r, r);
      GridField h = robust_h_from_duals(lam, lab, fam, xs, grid);
      GridField rho = sample_grid(-hw, hw, -hw, hw, r, r, [&fam](double x, double y) {
        return fam.s(0.0, cx(x, y));
      });
      return std::make_pair(h, laplacian_residual(h, rho, mask));
    };

    stage = "indicator_density";
    ActivationFamily ind = indicator_disk_family();
    auto [h1, r1] = residual_for(ind, res);
    auto [h2, r2] = residual_for(ind, res2);
    double order_ind = std::log2(r1.max_rel / r2.max_rel);
    bundle.add("pde_field.csv", grid_to_csv(h1));
    bundle.add_png("pde_check", "field", render_heatmap(h1));
    metrics["indicator"] = {
        {"max_rel_residual", r1.max_rel},
        {"max_rel_residual_refined", r2.max_rel},
        {"interior_nodes", r1.nodes},
        {"order", order_ind},
        {"h_grid", r1.h_grid}};

    stage = "smooth_density";
    ActivationFamily smooth = smooth_disk_family();
    auto [h3, r3] = residual_for(smooth, res);
    auto [h4, r4] = residual_for(smooth, res2);
    double order_smooth = std::log2(r3.max_rel / r4.max_rel);
    bundle.add_png("pde_check", "field_smooth", render_heatmap(h3));
    metrics["smooth"] = {{"max_rel_residual", r3.max_rel},
                         {"max_rel_residual_refined", r4.max_rel},
                         {"order", order_smooth}};

    stage = "assertions";
    asserts.check("max_rel_residual_within_tolerance", r1.max_rel <= tol);
    asserts.check("residual_improves_under_refinement", r2.max_rel < r1.max_rel);
    return finish(cfg, bundle, std::move(metrics), asserts);
  } catch (const std::exception& e) {
    return fail(cfg, stage, e.what());
  }
}

BundleResult run_transfer(const ExperimentConfig& cfg) {
  std::string stage = "setup";
  try {
    const json& P = cfg.params;
    const int n = P["n"], Ks = P["K_surrogate"], Kt = P["K_target"];
    const int probes = P["probes"];
    const double C = P["C"];
    AttackConfig ac = attack_from_params(P, P["eps"].get<double>());

    Bundle bundle(cfg.output_dir);
    Assertions asserts;
    json metrics;

    stage = "dataset";
    Dataset data = make_interval_dataset(n);

    stage = "train_surrogate";
    TrainConfig scfg;
    scfg.C = C;
    scfg.K = Ks;
    TrainedModel surrogate =
        train_real_svc(data, legendre_interval_basis(Ks), scfg);
    bundle.add("transfer_surrogate.csv", model_to_csv(surrogate));

    stage = "train_targets";
    TrainConfig tcfg;
    tcfg.C = C;
    tcfg.K = Kt;
    tcfg.kind = FeatureKind::ann_projected;
    TrainedModel target_nr = train_complex_svc(data, tcfg);
    TrainedModel target_ro = train_robust(data, tcfg);

    stage = "metrics";
    std::vector<LabeledSample> eval;
    for (int i = 0; i < probes; ++i) {
      double x = (i + 0.5) / probes;
      eval.push_back({cx(x, 0.0), sign0(x - 0.5)});
    }
    TransferReport rep_nr = transfer_metrics(target_nr, surrogate, eval, ac);
    TransferReport rep_ro = transfer_metrics(target_ro, surrogate, eval, ac);
    bundle.add("transfer_nonrobust.csv", transfer_to_csv(rep_nr));
    bundle.add("transfer_robust.csv", transfer_to_csv(rep_ro));
    auto to_json = [](const TransferReport& r) {
      return json{{"grad_norm_target", r.grad_norm_target},
                  {"grad_cosine_distance", r.grad_cosine_distance},
                  {"loss_variance_surrogate", r.loss_variance_surrogate},
                  {"transfer_rate", r.transfer_rate},
                  {"surrogate_successes", r.surrogate_successes},
                  {"points", r.points}};
    };
    metrics["nonrobust_target"] = to_json(rep_nr);
    metrics["robust_target"] = to_json(rep_ro);

    stage = "assertions";
    auto finite = [](const TransferReport& r) {
      return std::isfinite(r.grad_norm_target) &&
             std::isfinite(r.grad_cosine_distance) &&
             std::isfinite(r.loss_variance_surrogate) &&
             std::isfinite(r.transfer_rate);
    };
    asserts.check("metrics_finite", finite(rep_nr) && finite(rep_ro));
    asserts.check("nonrobust_transfers_more",
                  rep_nr.transfer_rate > rep_ro.transfer_rate);
    return finish(cfg, bundle, std::move(metrics), asserts);
  } catch (const std::exception& e) {
    return fail(cfg, stage, e.what());
  }
}

BundleResult run_normality(const ExperimentConfig& cfg) {
  std::string stage = "setup";
  try {
    const json& P = cfg.params;
    const int K = P["K"], ref_n = P["reference_n"];
    const int per_axis = P["grid_per_axis"], mem_n = P["memorizer_n"];
    const double C = P["C"], radius = P["grid_radius"];
    std::vector<int> schedule = P["schedule"].get<std::vector<int>>();

    Bundle bundle(cfg.output_dir);
    Assertions asserts;
    json metrics;

    stage = "probe";
    std::vector<cx> grid = disk_eval_grid(per_axis, radius);
    auto rule = [K, C](int n) {
      TrainConfig tc;
      tc.C = C;
      tc.K = K;
      return train_complex_svc(make_circle_dataset(n), tc).hypothesis;
    };
    NormalityReport rep = normality_probe(rule, schedule, ref_n, grid);
    bundle.add("normality.csv", normality_to_csv(rep));
    json table = json::array();
    for (std::size_t i = 0; i < rep.ns.size(); ++i)
      table.push_back({{"n", rep.ns[i]}, {"sup_deviation", rep.sup_deviation[i]}});
    metrics["svc"] = {{"reference", rep.reference}, {"table", table}};

    stage = "memorizer";
    auto labeler = [](cx z) { return sign0(z.real()); };
    auto mem_rule = [C, mem_n](int n) {
      Dataset d = make_circle_dataset(n);
      std::vector<cx> anchors;
      for (const auto& s : d.samples) anchors.push_back(s.z);
      double min_dist = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < anchors.size(); ++i)
        for (std::size_t j = i + 1; j < anchors.size(); ++j)
          min_dist = std::min(min_dist, std::abs(anchors[i] - anchors[j]));
      auto dirac = std::make_shared<DiracBasis>(FeatureDomain::unit_disk,
                                                anchors, 0.5 * min_dist);
      TrainConfig tc;
      tc.C = 1e8;  // hard margin: exact memorization
      tc.K = static_cast<int>(anchors.size());
      (void)mem_n;
      return train_real_svc(d, dirac, tc).hypothesis;
    };
    NormalityReport mem = normality_probe(mem_rule, {mem_n}, mem_n, grid,
                                          ProbeMode::vs_labeler, labeler);
    metrics["memorizer"] = {{"n", mem_n}, {"sup_vs_labels", mem.sup_deviation[0]}};

    stage = "assertions";
    bool decreasing = true;
    for (std::size_t i = 1; i < rep.sup_deviation.size(); ++i)
      decreasing = decreasing && rep.sup_deviation[i] < rep.sup_deviation[i - 1];
    asserts.check("sup_deviation_strictly_decreasing", decreasing);
    asserts.check("memorizer_sup_at_least_1", mem.sup_deviation[0] >= 1.0 - 1e-9);
    return finish(cfg, bundle, std::move(metrics), asserts);
  } catch (const std::exception& e) {
    return fail(cfg, stage, e.what());
  }
}

BundleResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.id == "fig1") return run_fig1(cfg);
  if (cfg.id == "fig2") return run_fig2(cfg);
  if (cfg.id == "pde_check") return run_pde_check(cfg);
  if (cfg.id == "transfer") return run_transfer(cfg);
  if (cfg.id == "normality") return run_normality(cfg);
  return fail(cfg, "dispatch", "unknown experiment id: " + cfg.id);
}

}  // namespace holo
