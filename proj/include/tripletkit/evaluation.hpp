#pragma once

// Evaluation metrics and the seeded experiment runner.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tripletkit/analytics.hpp"
#include "tripletkit/datagen.hpp"
#include "tripletkit/kernel.hpp"
#include "tripletkit/learning.hpp"

namespace tripletkit {

/// Ranks 1..m with ties sharing their average rank.
std::vector<double> average_ranks(std::span<const double> v);

/// Spearman correlation (Pearson on average ranks). Throws
/// UndefinedMetricError when either input is constant.
double spearman(std::span<const double> a, std::span<const double> b);

struct EvalReport {
  std::string metric;
  std::string method;  // e.g. "spearman"
  std::vector<double> values;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation of values, 0 for fewer than 2
  std::map<std::string, std::string> params;
  std::vector<std::string> warnings;
  std::vector<std::string> errors;
  /// Classification only: true-distance kNN accuracy on the same splits.
  std::vector<double> baseline;
};

/// Fills mean and stddev from values.
void summarize(EvalReport& r);

/// Per-row Spearman correlation of K against S = -D over off-diagonal entries.
/// Rows constant in K or S are skipped with a warning.
EvalReport rowwise_rank_correlation(const KernelMatrix& k, const DistanceMatrix& d);

/// cent(x) = sum over y of sim(x, y) = -sum over y of d(x, y).
std::vector<double> true_centrality(const DistanceMatrix& d);

/// Spearman(-cent', cent): cent' is small for central objects, cent large.
double centrality_rank_correlation(const CentralityVector& approx, std::span<const double> cent_true);

/// (max cent - cent[m]) / sigma(cent), sigma the sample standard deviation.
double median_relative_difference(std::span<const double> cent_true, ObjectId m);

/// d(m_true, m) / sigma(D).
double median_relative_distance(const DistanceMatrix& d, ObjectId m_true, ObjectId m);

/// For each object x: 1-D k-means with ceil(n/10) clusters on sim(x, .) over
/// the other objects, choose the cluster of largest mean similarity, and
/// score the percentage of approx_knn(x, k) inside it. One value per object.
EvalReport knn_closest_cluster_eval(const DistanceMatrix& d, const AnchorDagFamily& family, std::size_t k,
                                    std::uint64_t seed);

/// kNN classification by true distances, same vote rule as knn_classify.
Classification true_knn_classify(const DistanceMatrix& d, const LabeledSplit& split, std::size_t k);

enum class Task { RankCorrelation, Centrality, Median, Neighbors, Clustering, Classification };

Task parse_task(std::string_view s);
std::string_view task_name(Task t);

struct ExperimentConfig {
  Task task = Task::RankCorrelation;
  double tau_percent = 10.0;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  bool augment = false;
  TripletForm form = TripletForm::Anchor;
  std::size_t k = 10;         // neighbours (kNN, kNNG, classification)
  std::size_t clusters = 0;   // 0: number of distinct labels
  bool weighted = false;
  double split = 0.7;
  double p = 1.0;
};

/// generate -> (augment) -> build -> task -> metric for every seed. A failing
/// seed is recorded in errors and left out of values.
EvalReport run_experiment(const Dataset& ds, const DistanceMatrix& d, const ExperimentConfig& config);

struct SweepPoint {
  double tau_percent = 0.0;
  EvalReport raw;
  EvalReport augmented;
};

/// Runs the config at every tau, once on raw and once on augmented triplets.
std::vector<SweepPoint> run_sweep(const Dataset& ds, const DistanceMatrix& d, ExperimentConfig config,
                                  std::span<const double> taus);

/// Columns: tau,raw_mean,raw_std,aug_mean,aug_std.
void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points);

nlohmann::ordered_json to_json(const EvalReport& r);
nlohmann::ordered_json to_json(std::span<const SweepPoint> points);

}  // namespace tripletkit
