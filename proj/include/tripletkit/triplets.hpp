#pragma once

// Objects, similarity triplets in the three observation forms, and the
// normalized anchor-form triplet set every other module consumes.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace tripletkit {

/// Dense 0-based object index in [0, n).
using ObjectId = std::uint32_t;

enum class TripletForm { Anchor, Central, Outlier };

TripletForm parse_form(std::string_view s);
std::string_view form_name(TripletForm f);

/// (anchor, near, far): d(anchor, near) < d(anchor, far).
struct Triplet {
  ObjectId anchor = 0;
  ObjectId near = 0;
  ObjectId far = 0;

  friend auto operator<=>(const Triplet&, const Triplet&) = default;
};

/// `central` is the central element of {central, a, b}: the pair (a, b) is the farthest.
struct TripletC {
  ObjectId central = 0;
  ObjectId a = 0;
  ObjectId b = 0;
};

/// `outlier` is the outlier of {outlier, a, b}: the pair (a, b) is the closest.
struct TripletO {
  ObjectId outlier = 0;
  ObjectId a = 0;
  ObjectId b = 0;
};

/// Throws ParameterError when any two ids coincide.
void validate_distinct(ObjectId x, ObjectId y, ObjectId z);

std::pair<Triplet, Triplet> translate_c(const TripletC& t);
std::pair<Triplet, Triplet> translate_o(const TripletO& t);

/// Normalizes one raw record (x, y, z) of the given form into anchor triplets.
/// Anchor-form records yield a single triplet.
std::vector<Triplet> to_anchor_form(TripletForm form, ObjectId x, ObjectId y, ObjectId z);

/// Lexicographically sorted, duplicate-free set of anchor triplets over n objects.
///
/// A triplet and its direct contradiction may coexist; conflicts are a
/// property of the closure and are reported by augmentation.
class TripletSet {
 public:
  TripletSet() = default;

  /// Validates ids (< n, pairwise distinct), sorts and deduplicates.
  TripletSet(std::vector<Triplet> triplets, std::size_t n);

  /// Adopts triplets already in strictly increasing order; verifies order and
  /// ids in one linear pass instead of sorting.
  static TripletSet from_sorted(std::vector<Triplet> triplets, std::size_t n);

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return triplets_.size(); }
  bool empty() const noexcept { return triplets_.empty(); }

  /// Number of input triplets dropped as duplicates during construction.
  std::size_t duplicates_removed() const noexcept { return duplicates_removed_; }

  std::span<const Triplet> triplets() const noexcept { return triplets_; }
  auto begin() const noexcept { return triplets_.begin(); }
  auto end() const noexcept { return triplets_.end(); }
  const Triplet& operator[](std::size_t i) const { return triplets_[i]; }

  bool contains(const Triplet& t) const;

  /// Contiguous run of triplets whose anchor is `anchor`.
  std::span<const Triplet> anchored_at(ObjectId anchor) const;

  friend bool operator==(const TripletSet& a, const TripletSet& b) {
    return a.n_ == b.n_ && a.triplets_ == b.triplets_;
  }

 private:
  std::vector<Triplet> triplets_;
  std::size_t n_ = 0;
  std::size_t duplicates_removed_ = 0;
};

struct ParseOptions {
  /// Universe size; inferred as max id + 1 when absent.
  std::optional<std::size_t> n;
  /// Strict mode raises on the first malformed line; lenient mode skips and counts.
  bool strict = true;
};

struct ParseReport {
  std::size_t raw_records = 0;
  /// Raw records identical to an earlier raw record.
  std::size_t duplicate_records = 0;
  /// Anchor triplets dropped by deduplication after normalization
  /// (includes those produced by duplicate raw records).
  std::size_t anchor_duplicates = 0;
  std::size_t malformed_lines = 0;
  bool header_skipped = false;
};

struct ParseResult {
  TripletSet triplets;
  ParseReport report;
  /// Raw records as read, before translation. Useful for diagnostics.
  std::vector<std::array<ObjectId, 3>> raw;
};

ParseResult parse_triplets(std::istream& in, TripletForm form, const ParseOptions& opts = {});
ParseResult parse_triplets(const std::filesystem::path& path, TripletForm form,
                           const ParseOptions& opts = {});

/// Writes "anchor,near,far" lines, no header.
void write_triplets(std::ostream& out, const TripletSet& ts);
void write_triplets(const std::filesystem::path& path, const TripletSet& ts);

/// Writes raw records of any form, one "x,y,z" per line.
void write_raw_records(const std::filesystem::path& path,
                       std::span<const std::array<ObjectId, 3>> records);

}  // namespace tripletkit
