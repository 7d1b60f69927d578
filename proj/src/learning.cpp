#include "tripletkit/learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "tripletkit/errors.hpp"
#include "tripletkit/parallel.hpp"

namespace tripletkit {

LabeledSplit make_split(std::span<const Label> labels, double ratio, std::uint64_t seed) {
  const auto n = labels.size();
  if (!(ratio > 0.0 && ratio < 1.0)) throw ParameterError("split ratio must lie in (0, 1)");
  if (n < 2) throw ParameterError("need at least two objects to split");
  std::vector<ObjectId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i);
    std::swap(order[i], order[pick(rng)]);
  }
  auto train_count = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
  train_count = std::clamp<std::size_t>(train_count, 1, n - 1);

  LabeledSplit split;
  split.ratio = ratio;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_count));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(train_count), order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  for (auto id : split.train) split.train_labels.push_back(labels[id]);
  return split;
}

Label majority_vote(std::span<const ObjectId> ordered, std::span<const Label> label_of, std::size_t k) {
  if (ordered.empty()) throw ParameterError("majority vote over no neighbours");
  const auto take = std::min(k, ordered.size());
  std::map<Label, std::size_t> votes;
  std::size_t best = 0;
  for (std::size_t i = 0; i < take; ++i) best = std::max(best, ++votes[label_of[ordered[i]]]);
  for (std::size_t i = 0; i < take; ++i) {
    auto label = label_of[ordered[i]];
    if (votes[label] == best) return label;
  }
  return label_of[ordered[0]];
}

Classification knn_classify(const AnchorDagFamily& family, const LabeledSplit& split, std::size_t k) {
  if (k < 1) throw ParameterError("k must be at least 1");
  if (split.train.empty()) throw ParameterError("no training objects");
  std::vector<Label> label_of(family.n, -1);
  for (std::size_t i = 0; i < split.train.size(); ++i) label_of[split.train[i]] = split.train_labels[i];

  Classification result;
  result.predictions.resize(split.test.size());
  parallel_for(split.test.size(), [&](std::size_t t) {
    const ObjectId x = split.test[t];
    const auto& g = family.graphs[x];
    bool informed = std::any_of(split.train.begin(), split.train.end(), [&](ObjectId y) {
      return g.in_degree(y) + g.out_degree(y) > 0;
    });
    if (!informed) return;
    auto ordered = rank_by_closeness(family, x, split.train);
    result.predictions[t] = majority_vote(ordered, label_of, k);
  });
  for (const auto& p : result.predictions) result.abstentions += p.has_value() ? 0 : 1;
  return result;
}

double accuracy(const LabeledSplit& split, const Classification& c, std::span<const Label> truth) {
  std::size_t scored = 0;
  std::size_t correct = 0;
  for (std::size_t t = 0; t < split.test.size(); ++t) {
    if (!c.predictions[t]) continue;
    ++scored;
    correct += *c.predictions[t] == truth[split.test[t]] ? 1 : 0;
  }
  if (scored == 0) throw UndefinedMetricError("every test object abstained");
  return 100.0 * static_cast<double>(correct) / static_cast<double>(scored);
}

namespace {

KMeansResult kmeans_once(const Eigen::MatrixXd& points, std::size_t clusters, std::mt19937_64& rng,
                         std::size_t max_iterations) {
  const auto n = static_cast<Eigen::Index>(points.rows());
  const auto c = static_cast<Eigen::Index>(clusters);
  Eigen::MatrixXd centers(c, points.cols());

  // k-means++ seeding.
  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  centers.row(0) = points.row(first(rng));
  Eigen::VectorXd dist2(n);
  for (Eigen::Index i = 0; i < n; ++i) dist2[i] = (points.row(i) - centers.row(0)).squaredNorm();
  for (Eigen::Index j = 1; j < c; ++j) {
    const double total = dist2.sum();
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      double acc = 0.0;
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += dist2[i];
        if (acc >= target && dist2[i] > 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = first(rng);
    }
    centers.row(j) = points.row(chosen);
    for (Eigen::Index i = 0; i < n; ++i) {
      dist2[i] = std::min(dist2[i], (points.row(i) - centers.row(j)).squaredNorm());
    }
  }

  KMeansResult result;
  result.assignment.assign(static_cast<std::size_t>(n), std::numeric_limits<std::uint32_t>::max());
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      std::uint32_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < c; ++j) {
        double d = (points.row(i) - centers.row(j)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = static_cast<std::uint32_t>(j);
        }
      }
      if (result.assignment[static_cast<std::size_t>(i)] != best) {
        result.assignment[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    if (!changed) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(c, points.cols());
    std::vector<std::size_t> counts(static_cast<std::size_t>(c), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      auto a = result.assignment[static_cast<std::size_t>(i)];
      sums.row(a) += points.row(i);
      ++counts[a];
    }
    for (Eigen::Index j = 0; j < c; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0) {
        centers.row(j) = sums.row(j) / static_cast<double>(counts[static_cast<std::size_t>(j)]);
        continue;
      }
      // Empty cluster: move it onto the point farthest from its current center.
      Eigen::Index far = 0;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        double d = (points.row(i) - centers.row(result.assignment[static_cast<std::size_t>(i)])).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      centers.row(j) = points.row(far);
      result.assignment[static_cast<std::size_t>(far)] = static_cast<std::uint32_t>(j);
    }
  }

  result.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    result.inertia += (points.row(i) - centers.row(result.assignment[static_cast<std::size_t>(i)])).squaredNorm();
  }
  result.centers = std::move(centers);
  return result;
}

std::vector<std::uint32_t> connected_components(const KnnGraph& g, std::size_t& count) {
  std::vector<std::uint32_t> comp(g.n, std::numeric_limits<std::uint32_t>::max());
  count = 0;
  std::vector<ObjectId> stack;
  for (ObjectId s = 0; s < g.n; ++s) {
    if (comp[s] != std::numeric_limits<std::uint32_t>::max()) continue;
    auto id = static_cast<std::uint32_t>(count++);
    comp[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      ObjectId v = stack.back();
      stack.pop_back();
      for (const auto& e : g.adjacency[v]) {
        if (comp[e.to] == std::numeric_limits<std::uint32_t>::max()) {
          comp[e.to] = id;
          stack.push_back(e.to);
        }
      }
    }
  }
  return comp;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t clusters, std::size_t restarts,
                    std::uint64_t seed, std::size_t max_iterations) {
  if (clusters < 1) throw ParameterError("k-means needs at least one cluster");
  if (clusters > static_cast<std::size_t>(points.rows())) {
    throw ParameterError("k-means: more clusters (" + std::to_string(clusters) + ") than points (" +
                         std::to_string(points.rows()) + ")");
  }
  std::mt19937_64 rng(seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(1, restarts); ++r) {
    auto candidate = kmeans_once(points, clusters, rng, max_iterations);
    if (candidate.inertia < best.inertia) best = std::move(candidate);
  }
  return best;
}

ClusterAssignment spectral_cluster(const KnnGraph& g, std::size_t clusters, std::uint64_t seed) {
  const auto n = g.n;
  if (clusters < 2) throw ParameterError("spectral clustering needs at least 2 clusters");
  if (clusters > n) throw ParameterError("more clusters than objects");

  ClusterAssignment out;
  out.clusters = clusters;
  connected_components(g, out.components);
  if (out.components > clusters) {
    out.diagnostics.push_back("graph has " + std::to_string(out.components) +
                              " connected components, more than the " + std::to_string(clusters) +
                              " requested clusters");
  }

  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(nn, nn);
  for (ObjectId v = 0; v < n; ++v) {
    for (const auto& e : g.adjacency[v]) w(v, e.to) = e.weight;
  }
  Eigen::VectorXd inv_sqrt_deg(nn);
  std::size_t isolated = 0;
  for (Eigen::Index i = 0; i < nn; ++i) {
    double d = w.row(i).sum();
    if (d > 0.0) {
      inv_sqrt_deg[i] = 1.0 / std::sqrt(d);
    } else {
      inv_sqrt_deg[i] = 0.0;
      ++isolated;
    }
  }
  if (isolated > 0) out.diagnostics.push_back(std::to_string(isolated) + " isolated vertices");

  Eigen::MatrixXd laplacian = -(inv_sqrt_deg.asDiagonal() * w * inv_sqrt_deg.asDiagonal());
  laplacian.diagonal().array() += 1.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");

  Eigen::MatrixXd embedding = solver.eigenvectors().leftCols(static_cast<Eigen::Index>(clusters));
  for (Eigen::Index i = 0; i < nn; ++i) {
    double norm = embedding.row(i).norm();
    if (norm > 0.0) embedding.row(i) /= norm;
  }
  auto km = kmeans(embedding, clusters, 20, seed);
  out.cluster = std::move(km.assignment);
  return out;
}

double purity(std::span<const std::uint32_t> assignment, std::span<const Label> labels) {
  if (assignment.size() != labels.size()) throw ParameterError("purity: length mismatch");
  if (assignment.empty()) throw UndefinedMetricError("purity of an empty assignment");
  std::map<std::uint32_t, std::map<Label, std::size_t>> table;
  for (std::size_t i = 0; i < assignment.size(); ++i) ++table[assignment[i]][labels[i]];
  std::size_t majority = 0;
  for (const auto& [cluster, counts] : table) {
    std::size_t best = 0;
    for (const auto& [label, count] : counts) best = std::max(best, count);
    majority += best;
  }
  return 100.0 * static_cast<double>(majority) / static_cast<double>(assignment.size());
}

}  // namespace tripletkit
