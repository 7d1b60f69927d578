#include "tripletkit/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "tripletkit/errors.hpp"

namespace tripletkit {

Metric parse_metric(std::string_view s) {
  if (s == "euclidean") return Metric::Euclidean;
  if (s == "cosine") return Metric::Cosine;
  if (s == "cityblock") return Metric::Cityblock;
  throw ParameterError("unknown metric '" + std::string(s) + "' (expected euclidean, cosine or cityblock)");
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::Euclidean:
      return "euclidean";
    case Metric::Cosine:
      return "cosine";
    case Metric::Cityblock:
      return "cityblock";
  }
  return "?";
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    auto b = cell.find_first_not_of(" \t\r");
    auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

Dataset load_dataset_csv(const std::filesystem::path& path, bool has_labels, Metric metric) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset " + path.string());
  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_csv(line);
    const auto feature_cells = has_labels ? cells.size() - 1 : cells.size();
    if (cells.empty() || (has_labels && cells.size() < 2)) {
      throw ParseError(line_no, "too few columns");
    }
    std::vector<double> row(feature_cells);
    bool numeric = true;
    for (std::size_t j = 0; j < feature_cells; ++j) numeric &= parse_double(cells[j], row[j]);
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw ParseError(line_no, "non-numeric feature value");
    }
    first = false;
    if (width == 0) width = feature_cells;
    if (feature_cells != width) throw ParseError(line_no, "inconsistent column count");
    rows.push_back(std::move(row));
    if (has_labels) raw_labels.push_back(cells.back());
  }
  if (rows.size() < 3) throw ParameterError("dataset needs at least 3 objects");

  Dataset ds;
  ds.metric = metric;
  ds.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  if (has_labels) {
    std::map<std::string, Label> ids;
    std::vector<Label> labels;
    for (const auto& s : raw_labels) {
      auto [it, inserted] = ids.emplace(s, static_cast<Label>(ds.label_names.size()));
      if (inserted) ds.label_names.push_back(s);
      labels.push_back(it->second);
    }
    ds.labels = std::move(labels);
  }
  return ds;
}

std::vector<std::size_t> duplicate_rows(const Dataset& ds) {
  std::set<std::vector<double>> seen;
  std::vector<std::size_t> dups;
  for (Eigen::Index i = 0; i < ds.features.rows(); ++i) {
    std::vector<double> row(ds.features.row(i).data(), ds.features.row(i).data() + 0);
    row.resize(static_cast<std::size_t>(ds.features.cols()));
    for (Eigen::Index j = 0; j < ds.features.cols(); ++j) row[static_cast<std::size_t>(j)] = ds.features(i, j);
    if (!seen.insert(std::move(row)).second) dups.push_back(static_cast<std::size_t>(i));
  }
  return dups;
}

Dataset drop_duplicate_rows(const Dataset& ds) {
  auto dups = duplicate_rows(ds);
  if (dups.empty()) return ds;
  std::vector<bool> drop(ds.size(), false);
  for (auto i : dups) drop[i] = true;
  Dataset out;
  out.metric = ds.metric;
  out.label_names = ds.label_names;
  out.features.resize(static_cast<Eigen::Index>(ds.size() - dups.size()), ds.features.cols());
  std::vector<Label> labels;
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (drop[i]) continue;
    out.features.row(r++) = ds.features.row(static_cast<Eigen::Index>(i));
    if (ds.labels) labels.push_back((*ds.labels)[i]);
  }
  if (ds.labels) out.labels = std::move(labels);
  return out;
}

double DistanceMatrix::off_diagonal_stddev() const {
  if (n_ < 3) throw UndefinedMetricError("standard deviation needs at least two pairs");
  double sum = 0.0;
  double sq = 0.0;
  const double count = static_cast<double>(n_) * static_cast<double>(n_ - 1) / 2.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) sum += (*this)(i, j);
  }
  const double mean = sum / count;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) sq += ((*this)(i, j) - mean) * ((*this)(i, j) - mean);
  }
  return std::sqrt(sq / (count - 1.0));
}

DistanceMatrix distance_matrix(const Dataset& ds) {
  const auto n = ds.size();
  const auto& x = ds.features;
  DistanceMatrix d(n);
  Eigen::VectorXd norms;
  if (ds.metric == Metric::Cosine) {
    norms = x.rowwise().norm();
    for (Eigen::Index i = 0; i < norms.size(); ++i) {
      if (norms[i] == 0.0) {
        throw ParameterError("cosine distance undefined for zero-norm row " + std::to_string(i));
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      double v = 0.0;
      switch (ds.metric) {
        case Metric::Euclidean:
          v = (x.row(ii) - x.row(jj)).norm();
          break;
        case Metric::Cityblock:
          v = (x.row(ii) - x.row(jj)).cwiseAbs().sum();
          break;
        case Metric::Cosine:
          v = 1.0 - x.row(ii).dot(x.row(jj)) / (norms[ii] * norms[jj]);
          break;
      }
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

std::uint64_t total_anchor_comparisons(std::uint64_t n) {
  if (n < 3) return 0;
  return n * (n - 1) * (n - 2) / 2;
}

std::uint64_t total_unordered_triples(std::uint64_t n) {
  if (n < 3) return 0;
  return n * (n - 1) * (n - 2) / 6;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t choose2(std::uint64_t m) { return m < 2 ? 0 : m * (m - 1) / 2; }
std::uint64_t choose3(std::uint64_t m) { return m < 3 ? 0 : m * (m - 1) * (m - 2) / 6; }

// Largest b with choose2(b) <= r; the pair rank r maps to (r - choose2(b), b).
std::pair<std::uint64_t, std::uint64_t> unrank_pair(std::uint64_t r) {
  auto b = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(r))) / 2.0);
  while (choose2(b) > r) --b;
  while (choose2(b + 1) <= r) ++b;
  return {r - choose2(b), b};
}

std::array<std::uint64_t, 3> unrank_triple(std::uint64_t r) {
  auto c = static_cast<std::uint64_t>(std::cbrt(6.0 * static_cast<double>(r))) + 1;
  while (choose3(c) > r) --c;
  while (choose3(c + 1) <= r) ++c;
  auto [a, b] = unrank_pair(r - choose3(c));
  return {a, b, c};
}

}  // namespace

FeistelPermutation::FeistelPermutation(std::uint64_t domain, std::uint64_t seed) : domain_(domain) {
  if (domain == 0) throw ParameterError("empty permutation domain");
  unsigned bits = 1;
  while (bits < 64 && (std::uint64_t{1} << bits) < domain) ++bits;
  half_bits_ = (bits + 1) / 2;
  half_mask_ = (std::uint64_t{1} << half_bits_) - 1;
  std::uint64_t state = seed;
  for (auto& k : keys_) {
    state = splitmix64(state);
    k = state;
  }
}

std::uint64_t FeistelPermutation::encrypt(std::uint64_t x) const {
  std::uint64_t left = x >> half_bits_;
  std::uint64_t right = x & half_mask_;
  for (auto key : keys_) {
    std::uint64_t next = left ^ (splitmix64(right ^ key) & half_mask_);
    left = right;
    right = next;
  }
  return (left << half_bits_) | right;
}

std::uint64_t FeistelPermutation::operator()(std::uint64_t i) const {
  std::uint64_t y = encrypt(i);
  while (y >= domain_) y = encrypt(y);
  return y;
}

GeneratedTriplets generate_triplets(const DistanceMatrix& d, double fraction, std::uint64_t seed,
                                    TripletForm form) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ParameterError("triplet fraction must lie in (0, 1], got " + std::to_string(fraction));
  }
  const auto n = d.n();
  if (n < 3) throw ParameterError("need at least 3 objects to generate triplets");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (d(i, j) == 0.0) {
        throw ParameterError("objects " + std::to_string(i) + " and " + std::to_string(j) +
                             " coincide; remove duplicate rows before generating triplets");
      }
    }
  }

  GeneratedTriplets out;
  out.form = form;
  const std::uint64_t total =
      form == TripletForm::Anchor ? total_anchor_comparisons(n) : total_unordered_triples(n);
  out.requested = static_cast<std::uint64_t>(std::floor(fraction * static_cast<double>(total)));
  out.raw.reserve(out.requested);
  FeistelPermutation perm(total, seed);
  const std::uint64_t pairs_per_anchor = choose2(n - 1);

  for (std::uint64_t i = 0; i < total && out.raw.size() < out.requested; ++i) {
    const std::uint64_t idx = perm(i);
    if (form == TripletForm::Anchor) {
      const auto x = static_cast<ObjectId>(idx / pairs_per_anchor);
      auto [a, b] = unrank_pair(idx % pairs_per_anchor);
      const auto y = static_cast<ObjectId>(a + (a >= x ? 1 : 0));
      const auto z = static_cast<ObjectId>(b + (b >= x ? 1 : 0));
      const double dy = d(x, y);
      const double dz = d(x, z);
      if (dy == dz) {
        ++out.ties_skipped;
        continue;
      }
      out.raw.push_back(dy < dz ? std::array<ObjectId, 3>{x, y, z} : std::array<ObjectId, 3>{x, z, y});
      continue;
    }
    const auto t = unrank_triple(idx);
    const std::array<ObjectId, 3> v{static_cast<ObjectId>(t[0]), static_cast<ObjectId>(t[1]),
                                    static_cast<ObjectId>(t[2])};
    // opposite[k]: length of the side not touching v[k].
    const std::array<double, 3> opposite{d(v[1], v[2]), d(v[0], v[2]), d(v[0], v[1])};
    std::size_t pick = 0;
    bool tie = false;
    for (std::size_t k = 1; k < 3; ++k) {
      const bool better =
          form == TripletForm::Central ? opposite[k] > opposite[pick] : opposite[k] < opposite[pick];
      if (better) {
        pick = k;
        tie = false;
      } else if (opposite[k] == opposite[pick]) {
        tie = true;
      }
    }
    if (tie) {
      ++out.ties_skipped;
      continue;
    }
    std::array<ObjectId, 3> rec{v[pick], 0, 0};
    std::size_t w = 1;
    for (std::size_t k = 0; k < 3; ++k) {
      if (k != pick) rec[w++] = v[k];
    }
    out.raw.push_back(rec);
  }

  std::vector<Triplet> anchored;
  anchored.reserve(out.raw.size() * 2);
  for (const auto& r : out.raw) {
    for (const auto& t : to_anchor_form(form, r[0], r[1], r[2])) anchored.push_back(t);
  }
  out.triplets = TripletSet(std::move(anchored), n);
  return out;
}

}  // namespace tripletkit
