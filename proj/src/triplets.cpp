#include "tripletkit/triplets.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <string>

#include "tripletkit/errors.hpp"

namespace tripletkit {

TripletForm parse_form(std::string_view s) {
  if (s == "a" || s == "A") return TripletForm::Anchor;
  if (s == "c" || s == "C") return TripletForm::Central;
  if (s == "o" || s == "O") return TripletForm::Outlier;
  throw ParameterError("unknown triplet form '" + std::string(s) + "' (expected a, c or o)");
}

std::string_view form_name(TripletForm f) {
  switch (f) {
    case TripletForm::Anchor:
      return "a";
    case TripletForm::Central:
      return "c";
    case TripletForm::Outlier:
      return "o";
  }
  return "?";
}

void validate_distinct(ObjectId x, ObjectId y, ObjectId z) {
  if (x == y || x == z || y == z) {
    throw ParameterError("degenerate triplet (" + std::to_string(x) + "," + std::to_string(y) +
                         "," + std::to_string(z) + "): ids must be pairwise distinct");
  }
}

std::pair<Triplet, Triplet> translate_c(const TripletC& t) {
  validate_distinct(t.central, t.a, t.b);
  // d(x,y) < d(y,z) and d(x,z) < d(y,z)  <=>  (y,x,z)_A and (z,x,y)_A
  return {Triplet{t.a, t.central, t.b}, Triplet{t.b, t.central, t.a}};
}

std::pair<Triplet, Triplet> translate_o(const TripletO& t) {
  validate_distinct(t.outlier, t.a, t.b);
  // d(x,y) > d(y,z) and d(x,z) > d(y,z)  <=>  (y,z,x)_A and (z,y,x)_A
  return {Triplet{t.a, t.b, t.outlier}, Triplet{t.b, t.a, t.outlier}};
}

std::vector<Triplet> to_anchor_form(TripletForm form, ObjectId x, ObjectId y, ObjectId z) {
  switch (form) {
    case TripletForm::Anchor:
      validate_distinct(x, y, z);
      return {Triplet{x, y, z}};
    case TripletForm::Central: {
      auto [p, q] = translate_c({x, y, z});
      return {p, q};
    }
    case TripletForm::Outlier: {
      auto [p, q] = translate_o({x, y, z});
      return {p, q};
    }
  }
  return {};
}

TripletSet::TripletSet(std::vector<Triplet> triplets, std::size_t n) : n_(n) {
  for (const auto& t : triplets) {
    if (t.anchor >= n || t.near >= n || t.far >= n) {
      throw BoundsError("triplet (" + std::to_string(t.anchor) + "," + std::to_string(t.near) +
                        "," + std::to_string(t.far) + ") has an id >= n=" + std::to_string(n));
    }
    validate_distinct(t.anchor, t.near, t.far);
  }
  std::sort(triplets.begin(), triplets.end());
  auto last = std::unique(triplets.begin(), triplets.end());
  duplicates_removed_ = static_cast<std::size_t>(triplets.end() - last);
  triplets.erase(last, triplets.end());
  triplets_ = std::move(triplets);
}

TripletSet TripletSet::from_sorted(std::vector<Triplet> triplets, std::size_t n) {
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    const auto& t = triplets[i];
    if (t.anchor >= n || t.near >= n || t.far >= n) {
      throw BoundsError("triplet id outside universe of " + std::to_string(n));
    }
    validate_distinct(t.anchor, t.near, t.far);
    if (i > 0 && !(triplets[i - 1] < t)) {
      throw ParameterError("from_sorted: triplets not strictly increasing at index " +
                           std::to_string(i));
    }
  }
  TripletSet ts;
  ts.triplets_ = std::move(triplets);
  ts.n_ = n;
  return ts;
}

bool TripletSet::contains(const Triplet& t) const {
  return std::binary_search(triplets_.begin(), triplets_.end(), t);
}

std::span<const Triplet> TripletSet::anchored_at(ObjectId anchor) const {
  auto lo = std::lower_bound(triplets_.begin(), triplets_.end(), Triplet{anchor, 0, 0});
  auto hi = std::lower_bound(lo, triplets_.end(), Triplet{anchor + 1, 0, 0});
  return {lo, hi};
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Splits a line into exactly three non-negative integers; nullopt when malformed.
std::optional<std::array<ObjectId, 3>> split_record(std::string_view line) {
  std::array<ObjectId, 3> ids{};
  std::size_t field = 0;
  while (true) {
    auto comma = line.find(',');
    auto token = trim(line.substr(0, comma));
    if (field >= 3 || token.empty()) return std::nullopt;
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() ||
        value > std::numeric_limits<ObjectId>::max()) {
      return std::nullopt;
    }
    ids[field++] = static_cast<ObjectId>(value);
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  if (field != 3) return std::nullopt;
  return ids;
}

bool looks_like_header(std::string_view line) {
  return std::any_of(line.begin(), line.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  });
}

}  // namespace

ParseResult parse_triplets(std::istream& in, TripletForm form, const ParseOptions& opts) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  std::set<std::array<ObjectId, 3>> seen;

  while (std::getline(in, line)) {
    ++line_no;
    auto content = trim(line);
    if (content.empty()) continue;
    if (first_content && looks_like_header(content)) {
      first_content = false;
      result.report.header_skipped = true;
      continue;
    }
    first_content = false;

    auto rec = split_record(content);
    if (!rec) {
      if (opts.strict) {
        throw ParseError(line_no, "expected three comma-separated non-negative integers, got '" +
                                      std::string(content) + "'");
      }
      ++result.report.malformed_lines;
      continue;
    }
    const auto& r = *rec;
    if (r[0] == r[1] || r[0] == r[2] || r[1] == r[2]) {
      throw ParseError(line_no, "degenerate triplet with repeated ids '" + std::string(content) + "'");
    }
    if (opts.n) {
      for (auto id : r) {
        if (id >= *opts.n) {
          throw BoundsError("line " + std::to_string(line_no) + ": id " + std::to_string(id) +
                            " >= n=" + std::to_string(*opts.n));
        }
      }
    }
    ++result.report.raw_records;
    if (!seen.insert(r).second) ++result.report.duplicate_records;
    result.raw.push_back(r);
  }

  std::size_t n = opts.n.value_or(0);
  if (!opts.n) {
    for (const auto& r : result.raw) n = std::max<std::size_t>(n, *std::max_element(r.begin(), r.end()) + 1);
    n = std::max<std::size_t>(n, 3);
  }

  std::vector<Triplet> anchored;
  anchored.reserve(result.raw.size() * (form == TripletForm::Anchor ? 1 : 2));
  for (const auto& r : result.raw) {
    for (const auto& t : to_anchor_form(form, r[0], r[1], r[2])) anchored.push_back(t);
  }
  result.triplets = TripletSet(std::move(anchored), n);
  result.report.anchor_duplicates = result.triplets.duplicates_removed();
  return result;
}

ParseResult parse_triplets(const std::filesystem::path& path, TripletForm form,
                           const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open triplet file " + path.string());
  return parse_triplets(in, form, opts);
}

void write_triplets(std::ostream& out, const TripletSet& ts) {
  for (const auto& t : ts) out << t.anchor << ',' << t.near << ',' << t.far << '\n';
}

void write_triplets(const std::filesystem::path& path, const TripletSet& ts) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_triplets(out, ts);
}

void write_raw_records(const std::filesystem::path& path,
                       std::span<const std::array<ObjectId, 3>> records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : records) out << r[0] << ',' << r[1] << ',' << r[2] << '\n';
}

}  // namespace tripletkit
