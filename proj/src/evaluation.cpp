#include "tripletkit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "tripletkit/augmentation.hpp"
#include "tripletkit/errors.hpp"
#include "tripletkit/parallel.hpp"

namespace tripletkit {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

namespace {

double pearson(std::span<const double> a, std::span<const double> b) {
  const auto m = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / m;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / m;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) throw UndefinedMetricError("correlation of a constant vector");
  return sab / std::sqrt(saa * sbb);
}

bool constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

double sample_stddev(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double sq = 0.0;
  for (double x : v) sq += (x - mean) * (x - mean);
  return std::sqrt(sq / static_cast<double>(v.size() - 1));
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ParameterError("spearman: length mismatch");
  if (a.size() < 2) throw UndefinedMetricError("spearman needs at least two values");
  if (constant(a) || constant(b)) throw UndefinedMetricError("correlation of a constant vector");
  auto ra = average_ranks(a);
  auto rb = average_ranks(b);
  return pearson(ra, rb);
}

void summarize(EvalReport& r) {
  if (r.values.empty()) {
    r.mean = std::nan("");
    r.stddev = std::nan("");
    return;
  }
  r.mean = std::accumulate(r.values.begin(), r.values.end(), 0.0) / static_cast<double>(r.values.size());
  r.stddev = sample_stddev(r.values);
}

EvalReport rowwise_rank_correlation(const KernelMatrix& k, const DistanceMatrix& d) {
  const auto n = k.n();
  if (d.n() != n) throw ParameterError("kernel and distance matrices differ in size");
  EvalReport r;
  r.metric = "rowwise_rank_correlation";
  r.method = "spearman";
  std::vector<double> per_row(n, std::nan(""));
  parallel_for(n, [&](std::size_t x) {
    std::vector<double> a;
    std::vector<double> b;
    a.reserve(n - 1);
    b.reserve(n - 1);
    for (std::size_t y = 0; y < n; ++y) {
      if (y == x) continue;
      a.push_back(static_cast<double>(k(x, y)));
      b.push_back(similarity(d, x, y));
    }
    if (constant(a) || constant(b)) return;
    per_row[x] = spearman(a, b);
  });
  std::size_t skipped = 0;
  for (double v : per_row) {
    if (std::isnan(v)) {
      ++skipped;
    } else {
      r.values.push_back(v);
    }
  }
  if (skipped > 0) r.warnings.push_back(std::to_string(skipped) + " constant rows skipped");
  summarize(r);
  return r;
}

std::vector<double> true_centrality(const DistanceMatrix& d) {
  std::vector<double> c(d.n(), 0.0);
  for (std::size_t x = 0; x < d.n(); ++x) {
    for (std::size_t y = 0; y < d.n(); ++y) c[x] += similarity(d, x, y);
  }
  return c;
}

double centrality_rank_correlation(const CentralityVector& approx, std::span<const double> cent_true) {
  std::vector<double> negated(approx.values.size());
  std::transform(approx.values.begin(), approx.values.end(), negated.begin(), [](double v) { return -v; });
  return spearman(negated, cent_true);
}

double median_relative_difference(std::span<const double> cent_true, ObjectId m) {
  if (m >= cent_true.size()) throw BoundsError("median id out of range");
  const double sigma = sample_stddev(cent_true);
  if (sigma == 0.0) throw UndefinedMetricError("centrality has zero spread");
  return (*std::max_element(cent_true.begin(), cent_true.end()) - cent_true[m]) / sigma;
}

double median_relative_distance(const DistanceMatrix& d, ObjectId m_true, ObjectId m) {
  const double sigma = d.off_diagonal_stddev();
  if (sigma == 0.0) throw UndefinedMetricError("distances have zero spread");
  return d(m_true, m) / sigma;
}

EvalReport knn_closest_cluster_eval(const DistanceMatrix& d, const AnchorDagFamily& family, std::size_t k,
                                    std::uint64_t seed) {
  const auto n = d.n();
  if (family.n != n) throw ParameterError("graph family and distance matrix differ in size");
  const std::size_t clusters = (n + 9) / 10;
  if (clusters >= n - 1) {
    throw ParameterError("closest-cluster evaluation: " + std::to_string(clusters) + " clusters for " +
                         std::to_string(n) + " objects");
  }
  EvalReport r;
  r.metric = "closest_cluster_intersection";
  r.method = "kmeans-1d";
  r.params["k"] = std::to_string(k);
  r.params["clusters"] = std::to_string(clusters);
  r.values.assign(n, 0.0);
  parallel_for(n, [&](std::size_t x) {
    Eigen::MatrixXd points(static_cast<Eigen::Index>(n - 1), 1);
    std::vector<ObjectId> ids;
    ids.reserve(n - 1);
    for (std::size_t y = 0; y < n; ++y) {
      if (y == x) continue;
      points(static_cast<Eigen::Index>(ids.size()), 0) = similarity(d, x, y);
      ids.push_back(static_cast<ObjectId>(y));
    }
    auto km = kmeans(points, clusters, 3, seed + x);
    std::vector<double> sums(clusters, 0.0);
    std::vector<std::size_t> counts(clusters, 0);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      sums[km.assignment[i]] += points(static_cast<Eigen::Index>(i), 0);
      ++counts[km.assignment[i]];
    }
    std::size_t best = 0;
    double best_mean = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < clusters; ++c) {
      if (counts[c] == 0) continue;
      const double mean = sums[c] / static_cast<double>(counts[c]);
      if (mean > best_mean) {
        best_mean = mean;
        best = c;
      }
    }
    std::vector<bool> inside(n, false);
    for (std::size_t i = 0; i < ids.size(); ++i) inside[ids[i]] = km.assignment[i] == best;
    auto nn = approx_knn(family, static_cast<ObjectId>(x), k);
    std::size_t hits = 0;
    for (ObjectId y : nn) hits += inside[y] ? 1 : 0;
    r.values[x] = 100.0 * static_cast<double>(hits) / static_cast<double>(nn.size());
  });
  summarize(r);
  return r;
}

Classification true_knn_classify(const DistanceMatrix& d, const LabeledSplit& split, std::size_t k) {
  if (k < 1) throw ParameterError("k must be at least 1");
  std::vector<Label> label_of(d.n(), -1);
  for (std::size_t i = 0; i < split.train.size(); ++i) label_of[split.train[i]] = split.train_labels[i];
  Classification c;
  c.predictions.resize(split.test.size());
  for (std::size_t t = 0; t < split.test.size(); ++t) {
    const ObjectId x = split.test[t];
    std::vector<ObjectId> ordered(split.train.begin(), split.train.end());
    std::stable_sort(ordered.begin(), ordered.end(), [&](ObjectId a, ObjectId b) { return d(x, a) < d(x, b); });
    c.predictions[t] = majority_vote(ordered, label_of, k);
  }
  return c;
}

Task parse_task(std::string_view s) {
  if (s == "rankcorr") return Task::RankCorrelation;
  if (s == "centrality") return Task::Centrality;
  if (s == "median") return Task::Median;
  if (s == "knn") return Task::Neighbors;
  if (s == "cluster") return Task::Clustering;
  if (s == "classify") return Task::Classification;
  throw ParameterError("unknown task '" + std::string(s) +
                       "' (expected rankcorr, centrality, median, knn, cluster or classify)");
}

std::string_view task_name(Task t) {
  switch (t) {
    case Task::RankCorrelation:
      return "rankcorr";
    case Task::Centrality:
      return "centrality";
    case Task::Median:
      return "median";
    case Task::Neighbors:
      return "knn";
    case Task::Clustering:
      return "cluster";
    case Task::Classification:
      return "classify";
  }
  return "?";
}

namespace {

struct SeedOutcome {
  double value = 0.0;
  double baseline = 0.0;
  std::vector<std::string> warnings;
  std::string error;
};

std::size_t distinct_labels(const Dataset& ds) {
  return std::set<Label>(ds.labels->begin(), ds.labels->end()).size();
}

SeedOutcome run_seed(const Dataset& ds, const DistanceMatrix& d, const ExperimentConfig& config,
                     std::uint64_t seed) {
  SeedOutcome out;
  auto gen = generate_triplets(d, config.tau_percent / 100.0, seed, config.form);
  TripletSet ts = std::move(gen.triplets);
  if (config.augment) {
    auto aug = augment(ts);
    if (!aug.conflicts.empty()) {
      out.warnings.push_back(std::to_string(aug.conflicts.size()) + " conflicts");
    }
    ts = std::move(aug.augmented);
  }
  auto family = build_graphs(ts, d.n());

  switch (config.task) {
    case Task::RankCorrelation: {
      auto r = rowwise_rank_correlation(kernel_matrix(family, config.augment), d);
      for (auto& w : r.warnings) out.warnings.push_back(std::move(w));
      if (r.values.empty()) throw UndefinedMetricError("every kernel row is constant");
      out.value = r.mean;
      break;
    }
    case Task::Centrality:
      out.value = centrality_rank_correlation(centrality(kernel_matrix(family, config.augment), config.p),
                                              true_centrality(d));
      break;
    case Task::Median: {
      auto cent = true_centrality(d);
      auto m_true = static_cast<ObjectId>(std::max_element(cent.begin(), cent.end()) - cent.begin());
      auto m = median(centrality(kernel_matrix(family, config.augment), config.p));
      out.value = median_relative_distance(d, m_true, m);
      break;
    }
    case Task::Neighbors:
      out.value = knn_closest_cluster_eval(d, family, config.k, seed).mean;
      break;
    case Task::Clustering: {
      if (!ds.labels) throw ParameterError("clustering evaluation needs labels");
      const auto c = config.clusters > 0 ? config.clusters : distinct_labels(ds);
      auto assignment = spectral_cluster(build_knng(family, config.k, config.weighted), c, seed);
      for (auto& w : assignment.diagnostics) out.warnings.push_back(std::move(w));
      out.value = purity(assignment.cluster, *ds.labels);
      break;
    }
    case Task::Classification: {
      if (!ds.labels) throw ParameterError("classification evaluation needs labels");
      auto split = make_split(*ds.labels, config.split, seed);
      auto c = knn_classify(family, split, config.k);
      if (c.abstentions > 0) out.warnings.push_back(std::to_string(c.abstentions) + " abstentions");
      out.value = accuracy(split, c, *ds.labels);
      out.baseline = accuracy(split, true_knn_classify(d, split, config.k), *ds.labels);
      break;
    }
  }
  return out;
}

}  // namespace

EvalReport run_experiment(const Dataset& ds, const DistanceMatrix& d, const ExperimentConfig& config) {
  EvalReport r;
  r.metric = std::string(task_name(config.task));
  r.method = config.task == Task::RankCorrelation || config.task == Task::Centrality ? "spearman" : "";
  r.params["tau_percent"] = format_number(config.tau_percent);
  r.params["augmented"] = config.augment ? "true" : "false";
  r.params["form"] = std::string(form_name(config.form));
  r.params["metric"] = std::string(metric_name(ds.metric));
  std::string seeds;
  for (auto s : config.seeds) seeds += (seeds.empty() ? "" : " ") + std::to_string(s);
  r.params["seeds"] = seeds;
  if (config.task == Task::Neighbors || config.task == Task::Clustering || config.task == Task::Classification) {
    r.params["k"] = std::to_string(config.k);
  }
  if (config.task == Task::Centrality || config.task == Task::Median) r.params["p"] = format_number(config.p);
  if (config.task == Task::Clustering) {
    r.params["weighted"] = config.weighted ? "true" : "false";
    r.params["laplacian"] = "symmetric-normalized";
  }
  if (config.task == Task::Classification) r.params["split"] = format_number(config.split);

  std::vector<SeedOutcome> outcomes(config.seeds.size());
  parallel_for(config.seeds.size(), [&](std::size_t i) {
    try {
      outcomes[i] = run_seed(ds, d, config, config.seeds[i]);
    } catch (const std::exception& e) {
      outcomes[i].error = e.what();
    }
  });
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto tag = "seed " + std::to_string(config.seeds[i]) + ": ";
    for (const auto& w : outcomes[i].warnings) r.warnings.push_back(tag + w);
    if (!outcomes[i].error.empty()) {
      r.errors.push_back(tag + outcomes[i].error);
      continue;
    }
    r.values.push_back(outcomes[i].value);
    if (config.task == Task::Classification) r.baseline.push_back(outcomes[i].baseline);
  }
  summarize(r);
  return r;
}

std::vector<SweepPoint> run_sweep(const Dataset& ds, const DistanceMatrix& d, ExperimentConfig config,
                                  std::span<const double> taus) {
  std::vector<SweepPoint> points;
  for (double tau : taus) {
    SweepPoint p;
    p.tau_percent = tau;
    config.tau_percent = tau;
    config.augment = false;
    p.raw = run_experiment(ds, d, config);
    config.augment = true;
    p.augmented = run_experiment(ds, d, config);
    points.push_back(std::move(p));
  }
  return points;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points) {
  out << "tau,raw_mean,raw_std,aug_mean,aug_std\n";
  for (const auto& p : points) {
    out << format_number(p.tau_percent) << ',' << format_number(p.raw.mean) << ','
        << format_number(p.raw.stddev) << ',' << format_number(p.augmented.mean) << ','
        << format_number(p.augmented.stddev) << '\n';
  }
}

nlohmann::ordered_json to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["metric"] = r.metric;
  if (!r.method.empty()) j["method"] = r.method;
  j["mean"] = r.mean;
  j["std"] = r.stddev;
  j["values"] = r.values;
  if (!r.baseline.empty()) j["baseline"] = r.baseline;
  j["params"] = nlohmann::ordered_json(r.params);
  j["warnings"] = r.warnings;
  j["errors"] = r.errors;
  return j;
}

nlohmann::ordered_json to_json(std::span<const SweepPoint> points) {
  auto j = nlohmann::ordered_json::array();
  for (const auto& p : points) {
    j.push_back({{"tau", p.tau_percent}, {"raw", to_json(p.raw)}, {"augmented", to_json(p.augmented)}});
  }
  return j;
}

}  // namespace tripletkit
