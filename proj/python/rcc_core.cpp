// Python bindings for the core operations: data generation and loading,
// training, collective prediction, gradient certification, and metrics.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rcc/experiment.hpp"
#include "rcc/image.hpp"
#include "rcc/metrics.hpp"
#include "rcc/model_io.hpp"
#include "rcc/rng.hpp"

namespace py = pybind11;

namespace {

std::vector<std::vector<double>> matrix_to_lists(const rcc::Matrix& m) {
  std::vector<std::vector<double>> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    out[i].assign(m.row(i).begin(), m.row(i).end());
  return out;
}

rcc::Matrix lists_to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  rcc::Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols())
      throw std::invalid_argument("ragged matrix rows");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

rcc::ClassifierSpec make_classifier(const std::string& name, double tau) {
  return {rcc::classifier_kind_from_string(name), tau};
}

rcc::AggregatorSpec make_aggregator(const std::string& name, double tau) {
  return {rcc::aggregator_kind_from_string(name), tau};
}

rcc::TrainConfig make_train_config(int unroll, double eta, int iterations,
                                   double l2, std::uint64_t seed) {
  rcc::TrainConfig config;
  config.unroll_iterations = unroll;
  config.learning_rate = eta;
  config.iterations = iterations;
  config.lambda = l2;
  config.seed = seed;
  return config;
}

struct PyModel {
  rcc::TrainedModel model;
  std::vector<double> loss_history;
};

}  // namespace

PYBIND11_MODULE(rcc_core, m) {
  m.doc() = "Collective node classification: iterative prediction with "
            "back-propagation-through-the-loop training";

  py::class_<rcc::AttributedGraph>(m, "Graph")
      .def_property_readonly("num_nodes", &rcc::AttributedGraph::node_count)
      .def_property_readonly("feature_dim", &rcc::AttributedGraph::feature_dim)
      .def_property_readonly("num_classes", &rcc::AttributedGraph::num_classes)
      .def_property_readonly("num_edges",
                             [](const rcc::AttributedGraph& g) {
                               return g.adjacency.edge_count();
                             })
      .def("edges",
           [](const rcc::AttributedGraph& g) { return g.adjacency.edge_list(); })
      .def("neighbors",
           [](const rcc::AttributedGraph& g, int node) {
             return g.adjacency.neighbors(node);
           })
      .def("features",
           [](const rcc::AttributedGraph& g) {
             return matrix_to_lists(g.features.values);
           })
      .def("labels",
           [](const rcc::AttributedGraph& g) -> std::optional<std::vector<int>> {
             if (!g.labels) return std::nullopt;
             return g.labels->raw_values();
           })
      .def("validate", &rcc::AttributedGraph::validate)
      .def("__repr__", [](const rcc::AttributedGraph& g) {
        return "<Graph nodes=" + std::to_string(g.node_count()) +
               " edges=" + std::to_string(g.adjacency.edge_count()) +
               " d=" + std::to_string(g.feature_dim()) +
               " k=" + std::to_string(g.num_classes()) + ">";
      });

  py::class_<PyModel>(m, "Model")
      .def_property_readonly("method",
                             [](const PyModel& m_) {
                               return rcc::to_string(m_.model.method);
                             })
      .def_property_readonly("loss_history",
                             [](const PyModel& m_) { return m_.loss_history; })
      .def_property_readonly("theta",
                             [](const PyModel& m_) {
                               return matrix_to_lists(m_.model.params.theta);
                             })
      .def("predict",
           [](const PyModel& m_, const rcc::AttributedGraph& graph,
              std::uint64_t seed) {
             return matrix_to_lists(rcc::evaluate_method(m_.model, graph, seed));
           },
           py::arg("graph"), py::arg("seed") = 0,
           "Class-probability rows from features and links only")
      .def("save", [](const PyModel& m_, const std::string& path) {
        rcc::save_param_matrix(m_.model.params, m_.model.classifier, path);
      });

  m.def(
      "generate_synthetic_graph",
      [](int n, int k, int d, double homophily, double signal,
         double avg_degree, std::uint64_t seed) {
        rcc::SyntheticGraphConfig config;
        config.nodes = n;
        config.num_classes = k;
        config.feature_dim = d;
        config.homophily = homophily;
        config.signal = signal;
        config.avg_degree = avg_degree;
        config.seed = seed;
        return rcc::generate_synthetic_homophily_graph(config);
      },
      py::arg("n") = 400, py::arg("k") = 3, py::arg("d") = 10,
      py::arg("homophily") = 0.9, py::arg("signal") = 0.5,
      py::arg("avg_degree") = 8.0, py::arg("seed") = 0,
      "Planted-homophily random graph with class-informative features");

  m.def(
      "make_graph",
      [](int n, const std::vector<std::pair<int, int>>& edges,
         const std::vector<std::vector<double>>& features,
         const std::optional<std::vector<int>>& labels, int num_classes) {
        rcc::AttributedGraph graph;
        graph.adjacency = rcc::AdjacencyStructure::from_edges(n, edges);
        graph.features.values = lists_to_matrix(features);
        if (labels) graph.labels = rcc::LabelVector(*labels, num_classes);
        graph.validate();
        return graph;
      },
      py::arg("n"), py::arg("edges"), py::arg("features"),
      py::arg("labels") = std::nullopt, py::arg("num_classes") = 2);

  m.def(
      "load_citation_dataset",
      [](const std::string& content, const std::string& cites) {
        auto result = rcc::load_citation_dataset(content, cites);
        return py::make_tuple(std::move(result.graph), result.dropped_edges,
                              result.non_binary_values);
      },
      py::arg("content_path"), py::arg("cites_path"),
      "Returns (graph, dropped_edge_count, non_binary_value_count)");

  m.def(
      "snowball_split",
      [](const rcc::AttributedGraph& graph, double test_fraction,
         std::uint64_t seed) {
        auto split = rcc::snowball_split(graph, test_fraction, seed);
        return py::make_tuple(std::move(split.train), std::move(split.test));
      },
      py::arg("graph"), py::arg("test_fraction") = 0.2, py::arg("seed") = 0);

  m.def("delete_feature_columns", &rcc::delete_feature_columns,
        py::arg("graph"), py::arg("fraction"), py::arg("seed") = 0);

  m.def("sinusoidal_expand",
        [](const std::array<double, 5>& base) {
          const auto out = rcc::sinusoidal_expand(base);
          return std::vector<double>(out.begin(), out.end());
        },
        py::arg("base"));

  m.def(
      "train",
      [](const std::string& method, const rcc::AttributedGraph& graph,
         const std::string& classifier, const std::string& aggregator,
         double tau, int unroll, double eta, int iterations, double l2,
         std::uint64_t seed, int gibbs_burn_in, int gibbs_samples) {
        const auto f = make_classifier(classifier, tau);
        const auto g = make_aggregator(aggregator, tau);
        const auto config = make_train_config(unroll, eta, iterations, l2, seed);
        const auto kind = rcc::method_from_string(method);

        rcc::FitResult fit;
        switch (kind) {
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
        PyModel out;
        out.model = rcc::TrainedModel{kind,   f,             g,
                                      std::move(fit.params), unroll,
                                      gibbs_burn_in,         gibbs_samples};
        out.loss_history = std::move(fit.loss_history);
        return out;
      },
      py::arg("method"), py::arg("graph"), py::arg("classifier") = "sigmoid",
      py::arg("aggregator") = "proportion", py::arg("tau") = 0.5,
      py::arg("T") = 10, py::arg("eta") = 0.1, py::arg("iterations") = 500,
      py::arg("l2") = 1e-3, py::arg("seed") = 0,
      py::arg("gibbs_burn_in") = 100, py::arg("gibbs_samples") = 1000,
      "Fit one of local / ica / gs / rcc on a labeled graph");

  m.def(
      "load_model",
      [](const std::string& path, const std::string& method,
         const std::string& aggregator, double tau, int unroll) {
        auto [params, f] = rcc::load_param_matrix(path);
        PyModel out;
        out.model = rcc::TrainedModel{rcc::method_from_string(method),
                                      f,
                                      make_aggregator(aggregator, tau),
                                      std::move(params),
                                      unroll,
                                      100,
                                      1000};
        return out;
      },
      py::arg("path"), py::arg("method") = "rcc",
      py::arg("aggregator") = "proportion", py::arg("tau") = 0.5,
      py::arg("T") = 10);

  m.def("hard_labels",
        [](const std::vector<std::vector<double>>& probabilities) {
          return rcc::hard_labels(lists_to_matrix(probabilities)).raw_values();
        },
        py::arg("probabilities"));

  m.def(
      "compute_metrics",
      [](const std::vector<int>& predicted, const std::vector<int>& truth,
         int num_classes) {
        const auto m_ = rcc::compute_metrics(
            rcc::LabelVector(predicted, num_classes),
            rcc::LabelVector(truth, num_classes));
        return py::make_tuple(m_.accuracy, m_.f1);
      },
      py::arg("predicted"), py::arg("truth"), py::arg("num_classes"),
      "Returns (accuracy, f1-or-None)");

  m.def(
      "gradient_check",
      [](const rcc::AttributedGraph& graph, const std::string& classifier,
         const std::string& aggregator, double tau, int unroll,
         std::uint64_t seed, double param_scale, double step) {
        rcc::ParamMatrix params(graph.feature_dim(), graph.num_classes());
        rcc::Rng rng(rcc::mix_seed(seed, 77));
        for (double& v : params.theta.data()) v = param_scale * rng.normal();
        return rcc::finite_difference_check(graph,
                                            make_classifier(classifier, tau),
                                            make_aggregator(aggregator, tau),
                                            params, unroll, step);
      },
      py::arg("graph"), py::arg("classifier") = "softmax",
      py::arg("aggregator") = "proportion", py::arg("tau") = 0.5,
      py::arg("T") = 3, py::arg("seed") = 0, py::arg("param_scale") = 0.5,
      py::arg("step") = 1e-6,
      "Max relative error of the analytic gradient vs central differences");

  m.def(
      "loss_cross_section",
      [](const PyModel& model_a, const PyModel& model_b,
         const std::vector<double>& alphas, const rcc::AttributedGraph& graph,
         const std::string& classifier, const std::string& aggregator,
         double tau, int unroll) {
        return rcc::loss_cross_section(model_a.model.params,
                                       model_b.model.params, alphas, graph,
                                       make_classifier(classifier, tau),
                                       make_aggregator(aggregator, tau), unroll);
      },
      py::arg("model_a"), py::arg("model_b"), py::arg("alphas"),
      py::arg("graph"), py::arg("classifier") = "softmax",
      py::arg("aggregator") = "proportion", py::arg("tau") = 0.5,
      py::arg("T") = 10);
}
