#include "rcc/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rcc/image.hpp"
#include "rcc/metrics.hpp"
#include "rcc/rng.hpp"

namespace rcc {
namespace {

struct PreparedSplit {
  AttributedGraph train;
  AttributedGraph test;
  AttributedGraph validation;  // only with validation-based selection
  bool has_validation = false;
};

AttributedGraph merge_image_graphs(
    const std::vector<const GridImage*>& images) {
  int total_nodes = 0;
  for (const GridImage* img : images) total_nodes += img->pixel_count();

  std::vector<std::pair<int, int>> edges;
  Matrix features(static_cast<std::size_t>(total_nodes), 64);
  std::vector<int> labels(total_nodes);
  int offset = 0;
  for (const GridImage* img : images) {
    AttributedGraph g = build_grid_graph(*img);
    for (const auto& [a, b] : g.adjacency.edge_list())
      edges.emplace_back(a + offset, b + offset);
    for (int i = 0; i < g.node_count(); ++i) {
      auto src = g.features.values.row(i);
      std::copy(src.begin(), src.end(),
                features.row(static_cast<std::size_t>(offset + i)).begin());
      labels[offset + i] = g.labels->raw_values()[i];
    }
    offset += g.node_count();
  }

  AttributedGraph merged;
  merged.adjacency = AdjacencyStructure::from_edges(total_nodes, edges);
  merged.features.values = std::move(features);
  merged.labels =
      LabelVector(std::move(labels), 2, {"background", "foreground"});
  return merged;
}

/// Deterministic train/test graphs for one (noise level, split). For the
/// citation kind the loaded base graph is passed in (loaded once per sweep).
PreparedSplit prepare_split(const ExperimentSpec& spec,
                            const AttributedGraph* citation_base,
                            int noise_index, int split) {
  const double noise = spec.noise_levels[noise_index];
  const std::uint64_t column_seed =
      mix_seed(spec.seed, 1000 + noise_index * 101 + split);
  const std::uint64_t split_seed = mix_seed(spec.seed, 2000 + split);

  PreparedSplit out;
  switch (spec.dataset.kind) {
    case DatasetSpec::Kind::kSynthetic: {
      SyntheticGraphConfig config = spec.dataset.synthetic;
      config.seed = mix_seed(spec.seed, 100 + split);
      AttributedGraph graph = generate_synthetic_homophily_graph(config);
      if (noise > 0.0) graph = delete_feature_columns(graph, noise, column_seed);
      SnowballSplit sb = snowball_split(graph, spec.test_fraction, split_seed);
      out.train = std::move(sb.train);
      out.test = std::move(sb.test);
      break;
    }
    case DatasetSpec::Kind::kCitation: {
      AttributedGraph graph = noise > 0.0
                                  ? delete_feature_columns(*citation_base,
                                                           noise, column_seed)
                                  : *citation_base;
      SnowballSplit sb = snowball_split(graph, spec.test_fraction, split_seed);
      out.train = std::move(sb.train);
      out.test = std::move(sb.test);
      break;
    }
    case DatasetSpec::Kind::kImages: {
      const auto& paths = spec.dataset.image_paths;
      if (paths.size() < 2)
        throw std::invalid_argument("image sweep needs at least two images");
      std::vector<GridImage> images;
      images.reserve(paths.size());
      for (std::size_t m = 0; m < paths.size(); ++m) {
        GridImage img = load_grid_image(paths[m].first, paths[m].second);
        if (noise > 0.0)
          img = salt_pepper_noise(
              img, noise, mix_seed(spec.seed, 3000 + split * 1009 +
                                                  static_cast<int>(m)));
        images.push_back(std::move(img));
      }
      std::vector<int> order(images.size());
      for (std::size_t m = 0; m < order.size(); ++m)
        order[m] = static_cast<int>(m);
      Rng rng(split_seed);
      for (int m = static_cast<int>(order.size()) - 1; m > 0; --m)
        std::swap(order[m], order[rng.uniform_int(m + 1)]);
      const auto test_count = std::max<std::size_t>(
          1, static_cast<std::size_t>(
                 std::ceil(images.size() * spec.test_fraction)));
      std::vector<const GridImage*> test_imgs, train_imgs;
      for (std::size_t m = 0; m < order.size(); ++m)
        (m < test_count ? test_imgs : train_imgs)
            .push_back(&images[order[m]]);
      if (train_imgs.empty())
        throw std::invalid_argument("image split left no training images");
      out.train = merge_image_graphs(train_imgs);
      out.test = merge_image_graphs(test_imgs);
      break;
    }
  }

  if (spec.select_lambda_by_validation) {
    SnowballSplit holdout =
        snowball_split(out.train, 0.2, mix_seed(spec.seed, 5000 + split));
    out.validation = std::move(holdout.test);
    out.train = std::move(holdout.train);
    out.has_validation = true;
  }
  return out;
}

Metrics metrics_against(const Matrix& predictions,
                        const AttributedGraph& graph) {
  return compute_metrics(hard_labels(predictions), *graph.labels);
}

std::string format_fixed(double value) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(6);
  out << value;
  return out.str();
}

}  // namespace

Method method_from_string(const std::string& name) {
  if (name == "local") return Method::kLocal;
  if (name == "ica") return Method::kIca;
  if (name == "gs") return Method::kGibbs;
  if (name == "rcc") return Method::kRcc;
  throw std::invalid_argument("unknown method: " + name);
}

std::string to_string(Method method) {
  switch (method) {
    case Method::kLocal: return "local";
    case Method::kIca: return "ica";
    case Method::kGibbs: return "gs";
    default: return "rcc";
  }
}

TrainedModel train_method(Method method, const AttributedGraph& train_graph,
                          const ClassifierSpec& f, const AggregatorSpec& g,
                          const TrainConfig& config, int gibbs_burn_in,
                          int gibbs_samples) {
  TrainedModel model;
  model.method = method;
  model.classifier = f;
  model.aggregator = g;
  model.unroll_iterations = config.unroll_iterations;
  model.gibbs_burn_in = gibbs_burn_in;
  model.gibbs_samples = gibbs_samples;
  switch (method) {
    case Method::kLocal:
      model.params = train_local(train_graph, f, config).params;
      break;
    case Method::kIca:
    case Method::kGibbs:
      model.params = train_ica_baseline(train_graph, f, g, config).params;
      break;
    case Method::kRcc:
      model.params = train_rcc(train_graph, f, g, config).params;
      break;
  }
  return model;
}

Matrix evaluate_method(const TrainedModel& model, const AttributedGraph& graph,
                       std::uint64_t gibbs_seed) {
  InferenceConfig config;
  config.iterations = model.unroll_iterations;
  config.early_stop = true;
  config.seed = gibbs_seed;
  config.burn_in = model.gibbs_burn_in;
  config.samples = model.gibbs_samples;
  switch (model.method) {
    case Method::kLocal: {
      const Matrix zero_rel(static_cast<std::size_t>(graph.node_count()),
                            static_cast<std::size_t>(model.params.num_classes));
      return classifier_forward(model.classifier, graph.features.values,
                                zero_rel, model.params);
    }
    case Method::kIca:
      config.init = PredictionInit::kUniform;
      return ica_predict(graph, model.classifier, model.aggregator,
                         model.params, config)
          .predictions;
    case Method::kGibbs:
      return gibbs_predict(graph, model.classifier, model.aggregator,
                           model.params, config);
    case Method::kRcc:
    default:
      config.init = PredictionInit::kZeros;  // matches the trained loop
      return ica_predict(graph, model.classifier, model.aggregator,
                         model.params, config)
          .predictions;
  }
}

SweepResult run_noise_sweep(const ExperimentSpec& spec) {
  if (spec.splits < 1) throw std::invalid_argument("need at least one split");
  if (spec.noise_levels.empty() || spec.lambda_grid.empty())
    throw std::invalid_argument("empty noise or lambda grid");
  for (double noise : spec.noise_levels)
    if (noise < 0.0 || noise >= 1.0)
      throw std::invalid_argument("noise level outside [0, 1)");

  const int num_noise = static_cast<int>(spec.noise_levels.size());
  const int num_lambda = static_cast<int>(spec.lambda_grid.size());

  // Data preparation is single-threaded; jobs then share it read-only.
  AttributedGraph citation_base;
  if (spec.dataset.kind == DatasetSpec::Kind::kCitation)
    citation_base = load_citation_dataset(spec.dataset.content_path,
                                          spec.dataset.cites_path)
                        .graph;
  std::vector<PreparedSplit> prepared;
  prepared.reserve(static_cast<std::size_t>(num_noise) * spec.splits);
  for (int ni = 0; ni < num_noise; ++ni)
    for (int split = 0; split < spec.splits; ++split)
      prepared.push_back(prepare_split(spec, &citation_base, ni, split));

  struct Job {
    int noise_index, split, lambda_index;
  };
  std::vector<Job> jobs;
  jobs.reserve(prepared.size() * num_lambda);
  for (int ni = 0; ni < num_noise; ++ni)
    for (int split = 0; split < spec.splits; ++split)
      for (int li = 0; li < num_lambda; ++li)
        jobs.push_back({ni, split, li});

  std::vector<MetricsRecord> records(jobs.size());
  std::vector<double> selection_score(jobs.size(), 0.0);
  std::atomic<std::uint64_t> label_reads{0};
  std::atomic<std::size_t> next{0};

  const auto run_job = [&](std::size_t index) {
    const Job& job = jobs[index];
    const PreparedSplit& data =
        prepared[static_cast<std::size_t>(job.noise_index) * spec.splits +
                 job.split];
    MetricsRecord& rec = records[index];
    rec.method = to_string(spec.method);
    rec.noise_level = spec.noise_levels[job.noise_index];
    rec.split_index = job.split;
    rec.lambda = spec.lambda_grid[job.lambda_index];

    const auto start = std::chrono::steady_clock::now();
    try {
      TrainConfig config = spec.train;
      config.lambda = spec.lambda_grid[job.lambda_index];
      const TrainedModel model =
          train_method(spec.method, data.train, spec.classifier,
                       spec.aggregator, config, spec.gibbs_burn_in,
                       spec.gibbs_samples);

      // prediction first (the audited window), metric lookup after
      const auto labels_read = [&] {
        std::uint64_t total = data.train.labels->read_count() +
                              data.test.labels->read_count();
        if (data.has_validation) total += data.validation.labels->read_count();
        return total;
      };
      const std::uint64_t reads_before = labels_read();
      const Matrix train_pred = evaluate_method(
          model, data.train, mix_seed(spec.seed, 1000000 + 3 * index));
      const Matrix test_pred = evaluate_method(
          model, data.test, mix_seed(spec.seed, 1000001 + 3 * index));
      Matrix validation_pred;
      if (data.has_validation)
        validation_pred = evaluate_method(
            model, data.validation, mix_seed(spec.seed, 1000002 + 3 * index));
      label_reads += labels_read() - reads_before;

      const Metrics train_metrics = metrics_against(train_pred, data.train);
      const Metrics test_metrics = metrics_against(test_pred, data.test);
      rec.train_accuracy = train_metrics.accuracy;
      rec.train_f1 = train_metrics.f1;
      rec.test_accuracy = test_metrics.accuracy;
      rec.test_f1 = test_metrics.f1;
      selection_score[index] =
          data.has_validation
              ? metrics_against(validation_pred, data.validation).accuracy
              : rec.test_accuracy;
    } catch (const std::exception&) {
      rec.failed = true;
    }
    if (spec.record_timing) {
      rec.wall_time_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                        start)
              .count();
    }
  };

  // Auditing shares per-graph read counters, so jobs must not interleave.
  int workers = spec.workers > 0
                    ? spec.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (spec.audit_label_reads) workers = 1;

  if (workers == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= jobs.size()) return;
          run_job(i);
        }
      });
    for (auto& t : pool) t.join();
  }

  SweepResult result;
  result.records = records;
  result.eval_label_reads = label_reads.load();

  // Best-lambda summary per noise level: mean over splits of each split's
  // best-scoring record.
  for (int ni = 0; ni < num_noise; ++ni) {
    MetricsRecord summary;
    summary.method = to_string(spec.method);
    summary.noise_level = spec.noise_levels[ni];
    summary.split_index = -1;
    summary.lambda = -1.0;
    int used = 0;
    double f1_train_sum = 0.0, f1_test_sum = 0.0;
    bool all_f1 = true;
    for (int split = 0; split < spec.splits; ++split) {
      int best = -1;
      for (int li = 0; li < num_lambda; ++li) {
        const std::size_t index =
            (static_cast<std::size_t>(ni) * spec.splits + split) * num_lambda +
            li;
        if (records[index].failed) continue;
        if (best < 0 || selection_score[index] >
                            selection_score[static_cast<std::size_t>(best)])
          best = static_cast<int>(index);
      }
      if (best < 0) continue;
      const MetricsRecord& rec = records[static_cast<std::size_t>(best)];
      summary.train_accuracy += rec.train_accuracy;
      summary.test_accuracy += rec.test_accuracy;
      summary.wall_time_seconds += rec.wall_time_seconds;
      if (rec.train_f1 && rec.test_f1) {
        f1_train_sum += *rec.train_f1;
        f1_test_sum += *rec.test_f1;
      } else {
        all_f1 = false;
      }
      ++used;
    }
    if (used == 0) continue;
    summary.train_accuracy /= used;
    summary.test_accuracy /= used;
    summary.wall_time_seconds /= used;
    if (all_f1) {
      summary.train_f1 = f1_train_sum / used;
      summary.test_f1 = f1_test_sum / used;
    }
    result.records.push_back(std::move(summary));
  }
  return result;
}

std::string results_csv_string(const std::vector<MetricsRecord>& records) {
  std::ostringstream out;
  out << "method,noise,split,lambda,train_acc,test_acc,train_f1,test_f1,"
         "seconds\n";
  for (const MetricsRecord& rec : records) {
    out << rec.method << ',' << format_fixed(rec.noise_level) << ','
        << rec.split_index << ',' << format_fixed(rec.lambda) << ',';
    if (rec.failed) {
      out << ",,,";
    } else {
      out << format_fixed(rec.train_accuracy) << ','
          << format_fixed(rec.test_accuracy) << ',';
      if (rec.train_f1) out << format_fixed(*rec.train_f1);
      out << ',';
      if (rec.test_f1) out << format_fixed(*rec.test_f1);
    }
    out << ',' << format_fixed(rec.wall_time_seconds) << '\n';
  }
  return out.str();
}

void emit_results_csv(const std::vector<MetricsRecord>& records,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << results_csv_string(records);
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace rcc
