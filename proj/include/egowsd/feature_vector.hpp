#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace egowsd {

/// Sparse non-negative vector keyed by feature term.
///
/// Entries are kept sorted by feature so that dot products are a linear
/// merge. Non-positive (and non-finite) weights are never stored, and the
/// Euclidean norm is cached on construction.
class FeatureVector {
 public:
  using Entry = std::pair<std::string, double>;

  FeatureVector() = default;

  /// Duplicate features are summed before filtering.
  explicit FeatureVector(std::vector<Entry> entries);

  template <class Range>
  static FeatureVector from_range(const Range& range) {
    std::vector<Entry> entries;
    for (const auto& [feature, weight] : range) entries.emplace_back(feature, static_cast<double>(weight));
    return FeatureVector(std::move(entries));
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  double norm() const noexcept { return norm_; }

  /// Weight of `feature`, 0 when absent.
  double weight(std::string_view feature) const;
  bool contains(std::string_view feature) const { return weight(feature) > 0.0; }

  FeatureVector normalized() const;
  FeatureVector scaled(double factor) const;

  /// Keeps the `k` heaviest entries; equal weights keep the lexicographically
  /// smaller feature.
  FeatureVector top(std::size_t k) const;

  /// Entries ordered by weight descending, ties by feature ascending.
  std::vector<Entry> ranked() const;

  friend bool operator==(const FeatureVector& a, const FeatureVector& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<Entry> entries_;
  double norm_ = 0.0;
};

double dot(const FeatureVector& a, const FeatureVector& b);

/// Cosine similarity; 0 when either side is the zero vector.
double cosine(const FeatureVector& a, const FeatureVector& b);

/// Features present in both vectors with their weight on each side.
struct SharedFeature {
  std::string feature;
  double left = 0.0;
  double right = 0.0;

  friend bool operator==(const SharedFeature&, const SharedFeature&) = default;
};

std::vector<SharedFeature> shared_features(const FeatureVector& a, const FeatureVector& b);

}  // namespace egowsd
