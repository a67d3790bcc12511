#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rcc/dataset.hpp"
#include "rcc/graph.hpp"
#include "rcc/inference.hpp"
#include "rcc/train.hpp"

namespace rcc {

enum class Method { kLocal, kIca, kGibbs, kRcc };

Method method_from_string(const std::string& name);
std::string to_string(Method method);

struct DatasetSpec {
  enum class Kind { kSynthetic, kCitation, kImages } kind = Kind::kSynthetic;
  SyntheticGraphConfig synthetic;
  std::string content_path;
  std::string cites_path;
  // (ppm, pbm) pairs; each split shuffles them into train/test halves
  std::vector<std::pair<std::string, std::string>> image_paths;
};

struct ExperimentSpec {
  DatasetSpec dataset;
  Method method = Method::kRcc;
  ClassifierSpec classifier;
  AggregatorSpec aggregator;
  std::vector<double> noise_levels = {0.0};
  int splits = 10;
  double test_fraction = 0.2;
  TrainConfig train;
  std::vector<double> lambda_grid = {1e-3, 1e-2, 1e-1, 1.0};
  std::uint64_t seed = 0;
  int gibbs_burn_in = 100;
  int gibbs_samples = 1000;
  // pick per-split best lambda on a held-out fifth of the train graph
  // instead of on test accuracy
  bool select_lambda_by_validation = false;
  bool record_timing = false;  // wall-clock seconds column (non-reproducible)
  bool audit_label_reads = false;
  int workers = 0;  // 0 = hardware concurrency
};

struct MetricsRecord {
  std::string method;
  double noise_level = 0.0;
  int split_index = 0;   // -1 marks a best-lambda summary row
  double lambda = 0.0;   // -1 on summary rows (per-split choices may differ)
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::optional<double> train_f1;
  std::optional<double> test_f1;
  double wall_time_seconds = 0.0;
  bool failed = false;
};

struct SweepResult {
  std::vector<MetricsRecord> records;
  std::uint64_t eval_label_reads = 0;  // populated when auditing
};

/// One trained model evaluated on one graph using only features and links.
struct TrainedModel {
  Method method = Method::kLocal;
  ClassifierSpec classifier;
  AggregatorSpec aggregator;
  ParamMatrix params;
  int unroll_iterations = 10;
  int gibbs_burn_in = 100;
  int gibbs_samples = 1000;
};

TrainedModel train_method(Method method, const AttributedGraph& train_graph,
                          const ClassifierSpec& f, const AggregatorSpec& g,
                          const TrainConfig& config, int gibbs_burn_in = 100,
                          int gibbs_samples = 1000);

/// Predictions from local features and link structure alone; labels carried
/// by the graph are never read (the instrumented LabelVector proves it).
Matrix evaluate_method(const TrainedModel& model, const AttributedGraph& graph,
                       std::uint64_t gibbs_seed = 0);

/// Runs the noise-level x split x lambda grid for one method, in parallel
/// over independent jobs, and appends per-(noise) best-lambda summary rows.
SweepResult run_noise_sweep(const ExperimentSpec& spec);

/// Writes `method,noise,split,lambda,train_acc,test_acc,train_f1,test_f1,
/// seconds` with 6-decimal fixed formatting; absent F1 fields stay empty.
void emit_results_csv(const std::vector<MetricsRecord>& records,
                      const std::string& path);

std::string results_csv_string(const std::vector<MetricsRecord>& records);

}  // namespace rcc
