// Command-line front end: datasets, feature diagnostics, Szego/Bergman
// projections, SVC training, attacks, and the end-to-end experiments.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "holo/bergman.hpp"
#include "holo/core.hpp"
#include "holo/features.hpp"
#include "holo/learner.hpp"
#include "holo/pde.hpp"
#include "holo/pipelines.hpp"
#include "holo/quadrature.hpp"
#include "holo/render.hpp"
#include "holo/robustness.hpp"

namespace {

using holo::cx;
using nlohmann::json;

void emit(const std::string& out, const std::string& content) {
  if (out.empty())
    std::cout << content;
  else
    holo::write_file_atomic(out, content);
}

holo::Dataset load_dataset(const std::string& kind, int n) {
  if (kind == "circle") return holo::make_circle_dataset(n);
  if (kind == "interval") return holo::make_interval_dataset(n);
  throw CLI::ValidationError("--data", "expected circle or interval");
}

struct TrainFlags {
  std::string data = "circle";
  int n = 30;
  std::string kind = "orthonormal";
  double C = 10.0;
  int K = 30;
  bool robust = false;
  bool legendre = false;  // real SVC on the Legendre interval family
};

void add_train_flags(CLI::App* cmd, TrainFlags& tf) {
  cmd->add_option("--data", tf.data, "dataset: circle | interval")
      ->capture_default_str();
  cmd->add_option("--n", tf.n, "sample count")->capture_default_str();
  cmd->add_option("--K", tf.K, "feature count")->capture_default_str();
  cmd->add_option("--C", tf.C, "soft-margin weight")->capture_default_str();
  cmd->add_option("--kind", tf.kind,
                  "features: orthonormal | harmonic | ann_projected | "
                  "ann_projected_harmonic")
      ->capture_default_str();
  cmd->add_flag("--robust", tf.robust, "harmonic (robust) variant of --kind");
  cmd->add_flag("--legendre", tf.legendre,
                "real SVC on shifted-Legendre interval features");
}

holo::TrainedModel run_train(const TrainFlags& tf) {
  holo::Dataset data = load_dataset(tf.data, tf.n);
  holo::TrainConfig cfg;
  cfg.C = tf.C;
  cfg.K = tf.K;
  cfg.kind = holo::feature_kind_from_string(tf.kind);
  if (tf.legendre)
    return holo::train_real_svc(data, holo::legendre_interval_basis(tf.K), cfg);
  if (tf.robust) return holo::train_robust(data, cfg);
  return holo::train_complex_svc(data, cfg);
}

int run_pipeline(const std::string& id, const std::string& config_path,
                 const std::string& output_dir, long seed) {
  json j;
  if (!config_path.empty()) {
    j = json::parse(holo::read_file(config_path));
    if (!j.contains("experiment")) j["experiment"] = id;
  } else {
    j["experiment"] = id;
  }
  if (!id.empty() && j["experiment"] != id && !config_path.empty())
    throw std::invalid_argument("config experiment id mismatch: " +
                                j["experiment"].get<std::string>());
  if (!output_dir.empty()) j["output_dir"] = output_dir;
  if (!j.contains("seed")) j["seed"] = seed;
  holo::ExperimentConfig cfg = holo::parse_experiment_config(j);
  holo::BundleResult r = holo::run_experiment(cfg);
  if (r.ok) {
    std::cout << "{\"ok\": true, \"bundle\": \"" << r.dir << "\"}\n";
    return 0;
  }
  std::cout << r.failure << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Holomorphic-feature classifiers on the unit disk: training, "
      "robustness measurement, and figure pipelines"};
  app.require_subcommand(1);
  long seed = 0;
  app.add_option("--seed", seed, "seed for randomized components")
      ->capture_default_str();

  // dataset
  auto* c_dataset = app.add_subcommand("dataset", "emit a labeled dataset as CSV");
  std::string ds_kind = "circle", ds_out;
  int ds_n = 30;
  c_dataset->add_option("--kind", ds_kind, "circle | interval")->capture_default_str();
  c_dataset->add_option("--n", ds_n, "sample count")->capture_default_str();
  c_dataset->add_option("--out", ds_out, "output file (default stdout)");

  // basis
  auto* c_basis = app.add_subcommand(
      "basis", "feature-family diagnostics (gradient Gram diagonal or table)");
  std::string b_kind = "orthonormal", b_out;
  int b_K = 30;
  c_basis->add_option("--kind", b_kind, "feature kind")->capture_default_str();
  c_basis->add_option("--K", b_K, "feature count")->capture_default_str();
  c_basis->add_option("--out", b_out, "output file (default stdout)");

  // project
  auto* c_project = app.add_subcommand(
      "project", "holomorphic Bayes projection of the circle labeler");
  std::string p_rule = "szego", p_out;
  int p_K = 30;
  c_project->add_option("--rule", p_rule, "szego | bergman")->capture_default_str();
  c_project->add_option("--K", p_K, "truncation")->capture_default_str();
  c_project->add_option("--out", p_out, "output file (default stdout)");

  // train
  auto* c_train = app.add_subcommand("train", "soft-margin SVC training");
  TrainFlags tr;
  add_train_flags(c_train, tr);
  std::string tr_out_dir;
  c_train->add_option("--out-dir", tr_out_dir,
                      "write model.csv/model.json here (default stdout)");

  // attack
  auto* c_attack = app.add_subcommand("attack", "gradient attack on a trained model");
  TrainFlags at;
  add_train_flags(c_attack, at);
  double at_re = 1.0, at_im = 0.0, at_t = 0.0, at_eta = 0.05, at_eps = 2.0,
         at_tol = 1e-3;
  int at_iters = 400;
  c_attack->add_option("--re", at_re, "attack start, real part")->capture_default_str();
  c_attack->add_option("--im", at_im, "attack start, imaginary part")
      ->capture_default_str();
  c_attack->add_option("--t", at_t, "true label (default: labeler at start)");
  c_attack->add_option("--eta", at_eta, "step size")->capture_default_str();
  c_attack->add_option("--eps-max", at_eps, "perturbation budget")
      ->capture_default_str();
  c_attack->add_option("--iters", at_iters, "iteration budget")->capture_default_str();
  c_attack->add_option("--bisect-tol", at_tol, "bisection tolerance")
      ->capture_default_str();

  // pipelines
  struct PipeArgs {
    std::string config, output_dir;
  };
  auto add_pipe = [&app](const char* name, const char* help, PipeArgs& pa) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("--config", pa.config, "JSON config file");
    cmd->add_option("--output-dir", pa.output_dir, "bundle directory");
    return cmd;
  };
  PipeArgs pa_transfer, pa_normality, pa_pde, pa_experiment;
  auto* c_transfer =
      add_pipe("transfer", "attack transferability experiment", pa_transfer);
  auto* c_normality =
      add_pipe("normality", "sup-deviation normality probe", pa_normality);
  auto* c_pde = add_pipe("pde", "Laplace-identity check of the potential field",
                         pa_pde);
  auto* c_experiment =
      add_pipe("experiment", "run a figure pipeline by id", pa_experiment);
  std::string ex_id = "fig1";
  c_experiment->add_option("--id", ex_id, "fig1 | fig2 | pde_check | transfer | normality")
      ->capture_default_str();

  // render
  auto* c_render = app.add_subcommand("render", "render a hypothesis to PNG");
  TrainFlags rd;
  add_train_flags(c_render, rd);
  std::string rd_style = "domain", rd_source = "train", rd_out = "render.png";
  int rd_size = 512, rd_angles = 4096;
  c_render->add_option("--style", rd_style, "domain | profiles | range")
      ->capture_default_str();
  c_render->add_option("--source", rd_source, "train | bayes")->capture_default_str();
  c_render->add_option("--size", rd_size, "image size in pixels")
      ->capture_default_str();
  c_render->add_option("--angles", rd_angles, "circle samples")->capture_default_str();
  c_render->add_option("--out", rd_out, "output PNG path")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_dataset) {
      holo::Dataset d = load_dataset(ds_kind, ds_n);
      std::string csv = "re,im,t\n";
      for (const auto& s : d.samples)
        csv += holo::fmt_double(s.z.real()) + "," + holo::fmt_double(s.z.imag()) +
               "," + holo::fmt_double(s.t) + "\n";
      emit(ds_out, csv);
      return 0;
    }
    if (*c_basis) {
      auto fsp = holo::make_features(holo::feature_kind_from_string(b_kind), b_K);
      if (auto tab = std::dynamic_pointer_cast<const holo::TabulatedBasis>(fsp)) {
        emit(b_out, tab->to_csv());
        return 0;
      }
      Eigen::MatrixXd sigma = holo::tuning_matrix(*fsp, holo::disk_rule());
      std::string csv = "k,regularized,sigma_kk\n";
      for (int k = 0; k < fsp->size(); ++k)
        csv += std::to_string(k) + "," + (fsp->regularized(k) ? "1" : "0") + "," +
               holo::fmt_double(sigma(k, k)) + "\n";
      emit(b_out, csv);
      return 0;
    }
    if (*c_project) {
      auto labeler = [](cx z) { return holo::sign0(z.real()); };
      holo::BayesProjection proj;
      if (p_rule == "szego")
        proj = holo::holomorphic_bayes_szego(
            labeler, p_K,
            holo::circle_rule_split({holo::kPi / 2, 3 * holo::kPi / 2}, 64));
      else if (p_rule == "bergman")
        proj = holo::holomorphic_bayes_bergman(labeler, p_K, holo::disk_rule());
      else
        throw CLI::ValidationError("--rule", "expected szego or bergman");
      std::string csv = "k,re,im\n";
      for (int k = 0; k < proj.monomial_coeffs.size(); ++k)
        csv += std::to_string(k) + "," +
               holo::fmt_double(proj.monomial_coeffs[k].real()) + "," +
               holo::fmt_double(proj.monomial_coeffs[k].imag()) + "\n";
      emit(p_out, csv);
      return 0;
    }
    if (*c_train) {
      holo::TrainedModel m = run_train(tr);
      if (tr_out_dir.empty()) {
        std::cout << holo::model_to_json(m) << holo::model_to_csv(m);
      } else {
        holo::write_file_atomic(tr_out_dir + "/model.csv", holo::model_to_csv(m));
        holo::write_file_atomic(tr_out_dir + "/model.json", holo::model_to_json(m));
      }
      return 0;
    }
    if (*c_attack) {
      holo::TrainedModel m = run_train(at);
      cx z0(at_re, at_im);
      double t = at_t != 0.0 ? at_t : holo::sign0(at_re);
      holo::AttackConfig ac{at_eta, at_iters, at_eps, at_tol};
      holo::AttackResult r = holo::gradient_attack(m.hypothesis, z0, t, ac);
      holo::FlipRadius fr = holo::min_flip_radius(m.hypothesis, z0, t, ac);
      json out = {{"z", {r.z.real(), r.z.imag()}},
                  {"perturbation", r.perturbation},
                  {"success", r.success},
                  {"stalled", r.stalled},
                  {"iterations", r.iterations},
                  {"min_flip_radius", fr.radius},
                  {"flip_radius_capped", fr.capped}};
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    if (*c_transfer) return run_pipeline("transfer", pa_transfer.config,
                                         pa_transfer.output_dir, seed);
    if (*c_normality) return run_pipeline("normality", pa_normality.config,
                                          pa_normality.output_dir, seed);
    if (*c_pde)
      return run_pipeline("pde_check", pa_pde.config, pa_pde.output_dir, seed);
    if (*c_experiment) return run_pipeline(ex_id, pa_experiment.config,
                                           pa_experiment.output_dir, seed);
    if (*c_render) {
      holo::Hypothesis h;
      if (rd_source == "bayes")
        h = holo::holomorphic_bayes_szego(
                [](cx z) { return holo::sign0(z.real()); }, rd.K,
                holo::circle_rule_split({holo::kPi / 2, 3 * holo::kPi / 2}, 64))
                .hypothesis;
      else
        h = run_train(rd).hypothesis;
      if (rd_style == "domain") {
        holo::RenderConfig rc;
        rc.size = rd_size;
        holo::write_png(rd_out, holo::render_domain_coloring(h, rc).image);
      } else if (rd_style == "profiles") {
        holo::CurveData cdata = holo::circle_profile_data(h, rd_angles);
        holo::write_png(rd_out, holo::render_circle_profiles(cdata));
        holo::write_file_atomic(rd_out + ".csv", holo::curve_to_csv(cdata));
      } else if (rd_style == "range") {
        holo::RangeCurve rc = holo::range_curve(h, rd_angles);
        holo::write_png(rd_out, holo::render_range_curve(rc));
      } else {
        throw CLI::ValidationError("--style", "expected domain, profiles or range");
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
