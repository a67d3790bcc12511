// Command-line front end: training, prediction, gradient certification,
// noise-robustness sweeps, loss cross-sections, and synthetic data generation.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rcc/experiment.hpp"
#include "rcc/image.hpp"
#include "rcc/metrics.hpp"
#include "rcc/model_io.hpp"
#include "rcc/rng.hpp"

namespace {

namespace fs = std::filesystem;

struct DatasetOptions {
  std::string kind = "synth";
  int nodes = 400;
  int classes = 3;
  int dim = 10;
  double homophily = 0.9;
  double signal = 0.5;
  double avg_degree = 8.0;
  std::string content_path;
  std::string cites_path;
  std::vector<std::string> image_pairs;  // ppm:pbm
};

struct ModelOptions {
  std::string classifier = "sigmoid";
  std::string aggregator = "proportion";
  double tau = 0.5;
};

struct TrainOptions {
  int unroll = 10;
  double eta = 0.1;
  int iters = 500;
  double lambda = 1e-3;
  std::uint64_t seed = 0;
};

void add_dataset_options(CLI::App* cmd, DatasetOptions& opt) {
  cmd->add_option("--dataset", opt.kind, "Data source: synth, citation, images")
      ->check(CLI::IsMember({"synth", "citation", "images"}))
      ->capture_default_str();
  cmd->add_option("--n", opt.nodes, "Synthetic node count")
      ->capture_default_str();
  cmd->add_option("--k", opt.classes, "Synthetic class count")
      ->capture_default_str();
  cmd->add_option("--d", opt.dim, "Synthetic feature dimension")
      ->capture_default_str();
  cmd->add_option("--homophily", opt.homophily,
                  "Probability an edge joins same-label nodes")
      ->capture_default_str();
  cmd->add_option("--signal", opt.signal,
                  "Feature informativeness in [0, 1]")
      ->capture_default_str();
  cmd->add_option("--avg-degree", opt.avg_degree, "Synthetic average degree")
      ->capture_default_str();
  cmd->add_option("--content", opt.content_path, "Citation content file");
  cmd->add_option("--cites", opt.cites_path, "Citation cites file");
  cmd->add_option("--images", opt.image_pairs,
                  "Image pairs as image.ppm:mask.pbm")
      ->delimiter(',');
}

void add_model_options(CLI::App* cmd, ModelOptions& opt) {
  cmd->add_option("--classifier", opt.classifier, "sigmoid or softmax")
      ->check(CLI::IsMember({"sigmoid", "softmax"}))
      ->capture_default_str();
  cmd->add_option("--aggregator", opt.aggregator, "sum, proportion, or mode")
      ->check(CLI::IsMember({"sum", "proportion", "mode"}))
      ->capture_default_str();
  cmd->add_option("--tau", opt.tau,
                  "Temperature for softmax classifier and mode aggregator")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_train_options(CLI::App* cmd, TrainOptions& opt) {
  cmd->add_option("--T", opt.unroll, "Unroll iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--eta", opt.eta, "Adagrad initial learning rate")
      ->capture_default_str();
  cmd->add_option("--iters", opt.iters, "Optimizer steps")
      ->capture_default_str();
  cmd->add_option("--lambda", opt.lambda, "L2 regularization strength")
      ->capture_default_str();
  cmd->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
}

rcc::ClassifierSpec classifier_spec(const ModelOptions& opt) {
  return {rcc::classifier_kind_from_string(opt.classifier), opt.tau};
}

rcc::AggregatorSpec aggregator_spec(const ModelOptions& opt) {
  return {rcc::aggregator_kind_from_string(opt.aggregator), opt.tau};
}

rcc::TrainConfig train_config(const TrainOptions& opt) {
  rcc::TrainConfig config;
  config.unroll_iterations = opt.unroll;
  config.learning_rate = opt.eta;
  config.iterations = opt.iters;
  config.lambda = opt.lambda;
  config.seed = opt.seed;
  return config;
}

std::vector<std::pair<std::string, std::string>> parse_image_pairs(
    const std::vector<std::string>& pairs) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string& pair : pairs) {
    const auto colon = pair.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == pair.size())
      throw CLI::ValidationError("--images", "expected image.ppm:mask.pbm");
    out.emplace_back(pair.substr(0, colon), pair.substr(colon + 1));
  }
  return out;
}

rcc::DatasetSpec dataset_spec(const DatasetOptions& opt, std::uint64_t seed) {
  rcc::DatasetSpec spec;
  if (opt.kind == "synth") {
    spec.kind = rcc::DatasetSpec::Kind::kSynthetic;
    spec.synthetic.nodes = opt.nodes;
    spec.synthetic.num_classes = opt.classes;
    spec.synthetic.feature_dim = opt.dim;
    spec.synthetic.homophily = opt.homophily;
    spec.synthetic.signal = opt.signal;
    spec.synthetic.avg_degree = opt.avg_degree;
    spec.synthetic.seed = seed;
  } else if (opt.kind == "citation") {
    spec.kind = rcc::DatasetSpec::Kind::kCitation;
    if (opt.content_path.empty() || opt.cites_path.empty())
      throw CLI::ValidationError("--dataset",
                                 "citation needs --content and --cites");
    spec.content_path = opt.content_path;
    spec.cites_path = opt.cites_path;
  } else {
    spec.kind = rcc::DatasetSpec::Kind::kImages;
    spec.image_paths = parse_image_pairs(opt.image_pairs);
    if (spec.image_paths.empty())
      throw CLI::ValidationError("--dataset", "images needs --images pairs");
  }
  return spec;
}

/// Single graph for train/predict/cross-section (no splitting).
rcc::AttributedGraph load_single_graph(const DatasetOptions& opt,
                                       std::uint64_t seed) {
  if (opt.kind == "synth") {
    rcc::SyntheticGraphConfig config;
    config.nodes = opt.nodes;
    config.num_classes = opt.classes;
    config.feature_dim = opt.dim;
    config.homophily = opt.homophily;
    config.signal = opt.signal;
    config.avg_degree = opt.avg_degree;
    config.seed = seed;
    return rcc::generate_synthetic_homophily_graph(config);
  }
  if (opt.kind == "citation") {
    const auto result =
        rcc::load_citation_dataset(opt.content_path, opt.cites_path);
    if (result.dropped_edges > 0)
      std::cerr << "warning: dropped " << result.dropped_edges
                << " edges referencing unknown node ids\n";
    if (result.non_binary_values > 0)
      std::cerr << "warning: " << result.non_binary_values
                << " feature values are not 0/1\n";
    return result.graph;
  }
  const auto pairs = parse_image_pairs(opt.image_pairs);
  if (pairs.empty())
    throw CLI::ValidationError("--dataset", "images needs --images pairs");
  std::vector<std::pair<int, int>> edges;
  rcc::AttributedGraph merged;
  // reuse the grid builder per image and merge as disconnected components
  int offset = 0;
  std::vector<rcc::AttributedGraph> parts;
  for (const auto& [ppm, pbm] : pairs)
    parts.push_back(rcc::build_grid_graph(rcc::load_grid_image(ppm, pbm)));
  int total = 0;
  for (const auto& part : parts) total += part.node_count();
  merged.features.values = rcc::Matrix(static_cast<std::size_t>(total), 64);
  std::vector<int> labels(total);
  for (const auto& part : parts) {
    for (const auto& [a, b] : part.adjacency.edge_list())
      edges.emplace_back(a + offset, b + offset);
    for (int i = 0; i < part.node_count(); ++i) {
      auto src = part.features.values.row(i);
      std::copy(src.begin(), src.end(),
                merged.features.values.row(offset + i).begin());
      labels[offset + i] = part.labels->raw_values()[i];
    }
    offset += part.node_count();
  }
  merged.adjacency = rcc::AdjacencyStructure::from_edges(total, edges);
  merged.labels =
      rcc::LabelVector(std::move(labels), 2, {"background", "foreground"});
  return merged;
}

fs::path prepare_out_dir(const std::string& out) {
  const fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  fs::create_directories(dir);
  return dir;
}

void write_resolved_config(const CLI::App* cmd, const fs::path& dir) {
  std::ofstream out(dir / "resolved.config");
  out << cmd->config_to_str(true, false);
}

void write_loss_history(const std::vector<double>& history,
                        const fs::path& path) {
  std::ofstream out(path);
  out << "step,loss\n" << std::setprecision(17);
  for (std::size_t step = 0; step < history.size(); ++step)
    out << step + 1 << ',' << history[step] << '\n';
}

double accuracy_of(const rcc::TrainedModel& model,
                   const rcc::AttributedGraph& graph, std::uint64_t seed) {
  const auto pred = rcc::evaluate_method(model, graph, seed);
  return rcc::compute_metrics(rcc::hard_labels(pred), *graph.labels).accuracy;
}

std::vector<double> alpha_grid(double lo, double hi, double step) {
  std::vector<double> alphas;
  for (int i = 0;; ++i) {
    const double alpha = lo + i * step;
    if (alpha > hi + 1e-12) break;
    alphas.push_back(alpha);
  }
  return alphas;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recurrent collective classification toolkit"};
  app.require_subcommand(1);

  // ----- train -----
  auto* train = app.add_subcommand("train", "Fit a model and save it");
  DatasetOptions train_data;
  ModelOptions train_model;
  TrainOptions train_opts;
  std::string train_method = "rcc";
  std::string train_out = "out";
  double train_delete_fraction = 0.0;
  add_dataset_options(train, train_data);
  add_model_options(train, train_model);
  add_train_options(train, train_opts);
  train->add_option("--method", train_method, "local, ica, gs, or rcc")
      ->check(CLI::IsMember({"local", "ica", "gs", "rcc"}))
      ->capture_default_str();
  train->add_option("--delete-fraction", train_delete_fraction,
                    "Fraction of feature columns to remove first")
      ->capture_default_str();
  train->add_option("--out", train_out, "Output directory")
      ->capture_default_str();
  train->set_config("--config");

  // ----- predict -----
  auto* predict = app.add_subcommand("predict", "Apply a saved model");
  DatasetOptions predict_data;
  std::string predict_model_path;
  std::string predict_method = "rcc";
  std::string predict_aggregator = "proportion";
  std::string predict_init = "uniform";
  double predict_tau = 0.5;
  int predict_unroll = 10;
  int predict_burn_in = 100;
  int predict_samples = 1000;
  std::uint64_t predict_seed = 0;
  bool predict_no_early_stop = false;
  std::string predict_out = "out";
  add_dataset_options(predict, predict_data);
  predict->add_option("--model", predict_model_path, "Saved model file")
      ->required();
  predict->add_option("--method", predict_method, "local, ica, gs, or rcc")
      ->check(CLI::IsMember({"local", "ica", "gs", "rcc"}))
      ->capture_default_str();
  predict->add_option("--aggregator", predict_aggregator,
                      "sum, proportion, or mode")
      ->check(CLI::IsMember({"sum", "proportion", "mode"}))
      ->capture_default_str();
  predict->add_option("--tau", predict_tau, "Mode aggregator temperature")
      ->capture_default_str();
  predict->add_option("--init", predict_init, "zeros or uniform")
      ->check(CLI::IsMember({"zeros", "uniform"}))
      ->capture_default_str();
  predict->add_option("--T", predict_unroll, "Prediction iterations")
      ->capture_default_str();
  predict->add_flag("--no-early-stop", predict_no_early_stop,
                    "Always run all T iterations");
  predict->add_option("--gibbs-burn-in", predict_burn_in, "Gibbs burn-in sweeps")
      ->capture_default_str();
  predict->add_option("--gibbs-samples", predict_samples, "Gibbs counted sweeps")
      ->capture_default_str();
  predict->add_option("--seed", predict_seed, "Random seed")
      ->capture_default_str();
  predict->add_option("--out", predict_out, "Output directory")
      ->capture_default_str();
  predict->set_config("--config");

  // ----- gradcheck -----
  auto* gradcheck =
      app.add_subcommand("gradcheck", "Certify the gradient numerically");
  ModelOptions grad_model;
  int grad_n = 20, grad_d = 5, grad_k = 3, grad_T = 3;
  double grad_step = 1e-6, grad_tol = 1e-4, grad_scale = 0.5;
  std::uint64_t grad_seed = 0;
  add_model_options(gradcheck, grad_model);
  gradcheck->add_option("--n", grad_n, "Probe graph nodes")->capture_default_str();
  gradcheck->add_option("--d", grad_d, "Probe feature dim")->capture_default_str();
  gradcheck->add_option("--k", grad_k, "Probe classes")->capture_default_str();
  gradcheck->add_option("--T", grad_T, "Unroll iterations")->capture_default_str();
  gradcheck->add_option("--step", grad_step, "Central-difference step")
      ->capture_default_str();
  gradcheck->add_option("--tol", grad_tol, "Pass threshold")->capture_default_str();
  gradcheck->add_option("--param-scale", grad_scale, "Random parameter scale")
      ->capture_default_str();
  gradcheck->add_option("--seed", grad_seed, "Random seed")->capture_default_str();
  gradcheck->set_config("--config");

  // ----- sweep -----
  auto* sweep = app.add_subcommand("sweep", "Noise-robustness experiment grid");
  DatasetOptions sweep_data;
  ModelOptions sweep_model;
  TrainOptions sweep_train;
  std::vector<std::string> sweep_methods = {"local", "ica", "gs", "rcc"};
  std::vector<double> sweep_noise = {0.0, 0.3, 0.6, 0.9};
  std::vector<double> sweep_lambdas = {1e-3, 1e-2, 1e-1, 1.0};
  int sweep_splits = 10;
  double sweep_test_fraction = 0.2;
  int sweep_workers = 0;
  int sweep_burn_in = 100, sweep_samples = 1000;
  bool sweep_paper_scale = false, sweep_timing = false, sweep_validation = false;
  std::string sweep_out = "out";
  add_dataset_options(sweep, sweep_data);
  add_model_options(sweep, sweep_model);
  add_train_options(sweep, sweep_train);
  sweep->add_option("--method", sweep_methods, "Methods to compare")
      ->delimiter(',')
      ->check(CLI::IsMember({"local", "ica", "gs", "rcc"}))
      ->capture_default_str();
  sweep->add_option("--noise-levels", sweep_noise,
                    "Feature-deletion fractions (salt-and-pepper for images)")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--lambda-grid", sweep_lambdas, "L2 grid")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--splits", sweep_splits, "Random splits per noise level")
      ->capture_default_str();
  sweep->add_option("--test-fraction", sweep_test_fraction,
                    "Held-out node fraction")
      ->capture_default_str();
  sweep->add_option("--workers", sweep_workers, "Worker threads (0 = auto)")
      ->capture_default_str();
  sweep->add_option("--gibbs-burn-in", sweep_burn_in, "Gibbs burn-in sweeps")
      ->capture_default_str();
  sweep->add_option("--gibbs-samples", sweep_samples, "Gibbs counted sweeps")
      ->capture_default_str();
  sweep->add_flag("--paper-scale", sweep_paper_scale,
                  "2000 optimizer steps and 20 splits");
  sweep->add_flag("--timing", sweep_timing,
                  "Record wall-clock seconds (makes the CSV non-reproducible)");
  sweep->add_flag("--select-by-validation", sweep_validation,
                  "Pick lambda on a held-out fifth of the training graph");
  sweep->add_option("--out", sweep_out, "Output directory")
      ->capture_default_str();
  sweep->set_config("--config");

  // ----- cross-section -----
  auto* cross =
      app.add_subcommand("cross-section", "Loss along the RCC-to-ICA segment");
  DatasetOptions cross_data;
  ModelOptions cross_model;
  TrainOptions cross_opts;
  double cross_alpha_lo = -0.2, cross_alpha_hi = 1.2, cross_alpha_step = 0.05;
  std::string cross_out = "out";
  add_dataset_options(cross, cross_data);
  add_model_options(cross, cross_model);
  add_train_options(cross, cross_opts);
  cross->add_option("--alpha-min", cross_alpha_lo, "Lowest alpha")
      ->capture_default_str();
  cross->add_option("--alpha-max", cross_alpha_hi, "Highest alpha")
      ->capture_default_str();
  cross->add_option("--alpha-step", cross_alpha_step, "Alpha spacing")
      ->capture_default_str();
  cross->add_option("--out", cross_out, "Output directory")
      ->capture_default_str();
  cross->set_config("--config");

  // ----- gen-synthetic -----
  auto* gen = app.add_subcommand("gen-synthetic",
                                 "Write synthetic data to disk");
  std::string gen_kind = "graph";
  DatasetOptions gen_data;
  int gen_height = 32, gen_width = 32;
  std::uint64_t gen_seed = 0;
  std::string gen_out = "out";
  gen->add_option("--kind", gen_kind, "graph or image")
      ->check(CLI::IsMember({"graph", "image"}))
      ->capture_default_str();
  add_dataset_options(gen, gen_data);
  gen->add_option("--height", gen_height, "Image height")->capture_default_str();
  gen->add_option("--width", gen_width, "Image width")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output directory")->capture_default_str();
  gen->set_config("--config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      const auto dir = prepare_out_dir(train_out);
      auto graph = load_single_graph(train_data, train_opts.seed);
      if (train_delete_fraction > 0.0)
        graph = rcc::delete_feature_columns(graph, train_delete_fraction,
                                            rcc::mix_seed(train_opts.seed, 1));
      const auto f = classifier_spec(train_model);
      const auto g = aggregator_spec(train_model);
      const auto config = train_config(train_opts);
      const auto method = rcc::method_from_string(train_method);

      rcc::FitResult fit;
      switch (method) {
        case rcc::Method::kLocal:
          fit = rcc::train_local(graph, f, config);
          break;
        case rcc::Method::kIca:
        case rcc::Method::kGibbs:
          fit = rcc::train_ica_baseline(graph, f, g, config);
          break;
        case rcc::Method::kRcc:
          fit = rcc::train_rcc(graph, f, g, config);
          break;
      }
      rcc::save_param_matrix(fit.params, f, (dir / "model.txt").string());
      write_loss_history(fit.loss_history, dir / "loss_history.csv");
      write_resolved_config(train, dir);

      rcc::TrainedModel model{method, f, g, fit.params,
                              config.unroll_iterations, 100, 1000};
      std::cout << "final loss " << fit.loss_history.back()
                << ", training accuracy "
                << accuracy_of(model, graph, train_opts.seed) << '\n';
    } else if (*predict) {
      const auto dir = prepare_out_dir(predict_out);
      const auto graph = load_single_graph(predict_data, predict_seed);
      auto [params, f] = rcc::load_param_matrix(predict_model_path);

      rcc::TrainedModel model;
      model.method = rcc::method_from_string(predict_method);
      model.classifier = f;
      model.aggregator = {rcc::aggregator_kind_from_string(predict_aggregator),
                          predict_tau};
      model.params = std::move(params);
      model.unroll_iterations = predict_unroll;
      model.gibbs_burn_in = predict_burn_in;
      model.gibbs_samples = predict_samples;

      rcc::Matrix probabilities;
      if (model.method == rcc::Method::kLocal ||
          model.method == rcc::Method::kGibbs) {
        probabilities = rcc::evaluate_method(model, graph, predict_seed);
      } else {
        rcc::InferenceConfig config;
        config.iterations = predict_unroll;
        config.init = predict_init == "zeros" ? rcc::PredictionInit::kZeros
                                              : rcc::PredictionInit::kUniform;
        config.early_stop = !predict_no_early_stop;
        probabilities = rcc::ica_predict(graph, model.classifier,
                                         model.aggregator, model.params, config)
                            .predictions;
      }
      const auto labels = rcc::hard_labels(probabilities);

      std::ofstream out(dir / "predictions.csv");
      out << "node,label";
      for (int c = 0; c < model.params.num_classes; ++c) out << ",p" << c;
      out << '\n' << std::setprecision(17);
      for (int i = 0; i < graph.node_count(); ++i) {
        out << i << ',' << labels.raw_values()[i];
        for (int c = 0; c < model.params.num_classes; ++c)
          out << ',' << probabilities(i, c);
        out << '\n';
      }
      write_resolved_config(predict, dir);
      if (graph.labels)
        std::cout << "accuracy "
                  << rcc::compute_metrics(labels, *graph.labels).accuracy
                  << '\n';
    } else if (*gradcheck) {
      rcc::SyntheticGraphConfig data;
      data.nodes = grad_n;
      data.feature_dim = grad_d;
      data.num_classes = grad_k;
      data.homophily = 0.8;
      data.signal = 0.5;
      data.avg_degree = 4.0;
      data.seed = grad_seed;
      const auto graph = rcc::generate_synthetic_homophily_graph(data);
      rcc::ParamMatrix params(grad_d, grad_k);
      rcc::Rng rng(rcc::mix_seed(grad_seed, 77));
      for (double& v : params.theta.data()) v = grad_scale * rng.normal();
      const double err = rcc::finite_difference_check(
          graph, classifier_spec(grad_model), aggregator_spec(grad_model),
          params, grad_T, grad_step);
      std::cout << "max relative error " << err << " (tolerance " << grad_tol
                << ")\n";
      return err < grad_tol ? 0 : 1;
    } else if (*sweep) {
      const auto dir = prepare_out_dir(sweep_out);
      rcc::ExperimentSpec spec;
      spec.dataset = dataset_spec(sweep_data, sweep_train.seed);
      spec.classifier = classifier_spec(sweep_model);
      spec.aggregator = aggregator_spec(sweep_model);
      spec.noise_levels = sweep_noise;
      spec.splits = sweep_paper_scale ? 20 : sweep_splits;
      spec.test_fraction = sweep_test_fraction;
      spec.train = train_config(sweep_train);
      if (sweep_paper_scale) spec.train.iterations = 2000;
      spec.lambda_grid = sweep_lambdas;
      spec.seed = sweep_train.seed;
      spec.gibbs_burn_in = sweep_burn_in;
      spec.gibbs_samples = sweep_samples;
      spec.select_lambda_by_validation = sweep_validation;
      spec.record_timing = sweep_timing;
      spec.workers = sweep_workers;

      std::vector<rcc::MetricsRecord> all;
      for (const std::string& name : sweep_methods) {
        spec.method = rcc::method_from_string(name);
        auto result = rcc::run_noise_sweep(spec);
        all.insert(all.end(), result.records.begin(), result.records.end());
      }
      rcc::emit_results_csv(all, (dir / "results.csv").string());
      write_resolved_config(sweep, dir);
      std::cout << "wrote " << all.size() << " records to "
                << (dir / "results.csv").string() << '\n';
    } else if (*cross) {
      const auto dir = prepare_out_dir(cross_out);
      const auto graph = load_single_graph(cross_data, cross_opts.seed);
      const auto f = classifier_spec(cross_model);
      const auto g = aggregator_spec(cross_model);
      const auto config = train_config(cross_opts);

      const auto rcc_fit = rcc::train_rcc(graph, f, g, config);
      const auto ica_fit = rcc::train_ica_baseline(graph, f, g, config);
      const auto alphas =
          alpha_grid(cross_alpha_lo, cross_alpha_hi, cross_alpha_step);
      const auto curve =
          rcc::loss_cross_section(rcc_fit.params, ica_fit.params, alphas, graph,
                                  f, g, config.unroll_iterations);

      std::ofstream out(dir / "cross_section.csv");
      out << "alpha,loss\n" << std::setprecision(17);
      for (const auto& [alpha, loss] : curve)
        out << alpha << ',' << loss << '\n';
      rcc::save_param_matrix(rcc_fit.params, f, (dir / "model_rcc.txt").string());
      rcc::save_param_matrix(ica_fit.params, f, (dir / "model_ica.txt").string());
      write_resolved_config(cross, dir);
      std::cout << "wrote " << curve.size() << " cross-section points\n";
    } else if (*gen) {
      const auto dir = prepare_out_dir(gen_out);
      if (gen_kind == "image") {
        const auto img =
            rcc::generate_synthetic_image(gen_height, gen_width, gen_seed);
        rcc::write_ppm(img, (dir / "image.ppm").string());
        rcc::write_pbm(img, (dir / "mask.pbm").string());
        std::cout << "wrote image.ppm and mask.pbm\n";
      } else {
        rcc::SyntheticGraphConfig config;
        config.nodes = gen_data.nodes;
        config.num_classes = gen_data.classes;
        config.feature_dim = gen_data.dim;
        config.homophily = gen_data.homophily;
        config.signal = gen_data.signal;
        config.avg_degree = gen_data.avg_degree;
        config.seed = gen_seed;
        const auto graph = rcc::generate_synthetic_homophily_graph(config);

        std::ofstream content(dir / "content.tsv");
        content << std::setprecision(17);
        for (int i = 0; i < graph.node_count(); ++i) {
          content << i;
          for (int j = 0; j < graph.feature_dim(); ++j)
            content << '\t' << graph.features.values(i, j);
          content << '\t' << graph.labels->class_names()[
              graph.labels->raw_values()[i]] << '\n';
        }
        std::ofstream cites(dir / "cites.tsv");
        for (const auto& [a, b] : graph.adjacency.edge_list())
          cites << a << '\t' << b << '\n';
        std::cout << "wrote content.tsv and cites.tsv (" << graph.node_count()
                  << " nodes, " << graph.adjacency.edge_count() << " edges)\n";
      }
      write_resolved_config(gen, dir);
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 1;
  }
  return 0;
}
