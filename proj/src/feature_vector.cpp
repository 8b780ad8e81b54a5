#include "egowsd/feature_vector.hpp"

#include <algorithm>
#include <cmath>

namespace egowsd {

FeatureVector::FeatureVector(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  entries_.reserve(entries.size());
  for (auto& entry : entries) {
    if (!entries_.empty() && entries_.back().first == entry.first) {
      entries_.back().second += entry.second;
    } else {
      entries_.push_back(std::move(entry));
    }
  }
  std::erase_if(entries_, [](const Entry& e) { return !(e.second > 0.0) || !std::isfinite(e.second); });
  double sq = 0.0;
  for (const auto& [_, w] : entries_) sq += w * w;
  norm_ = std::sqrt(sq);
}

double FeatureVector::weight(std::string_view feature) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), feature,
                             [](const Entry& e, std::string_view f) { return e.first < f; });
  if (it == entries_.end() || it->first != feature) return 0.0;
  return it->second;
}

FeatureVector FeatureVector::normalized() const {
  if (norm_ == 0.0) return {};
  return scaled(1.0 / norm_);
}

FeatureVector FeatureVector::scaled(double factor) const {
  std::vector<Entry> out = entries_;
  for (auto& e : out) e.second *= factor;
  return FeatureVector(std::move(out));
}

std::vector<FeatureVector::Entry> FeatureVector::ranked() const {
  std::vector<Entry> out = entries_;
  // Stable over the feature-sorted input, so equal weights stay lexicographic.
  std::stable_sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.second > b.second; });
  return out;
}

FeatureVector FeatureVector::top(std::size_t k) const {
  if (entries_.size() <= k) return *this;
  auto out = ranked();
  out.resize(k);
  return FeatureVector(std::move(out));
}

double dot(const FeatureVector& a, const FeatureVector& b) {
  const auto& x = a.entries();
  const auto& y = b.entries();
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    int c = x[i].first.compare(y[j].first);
    if (c == 0) {
      sum += x[i].second * y[j].second;
      ++i;
      ++j;
    } else if (c < 0) {
      ++i;
    } else {
      ++j;
    }
  }
  return sum;
}

double cosine(const FeatureVector& a, const FeatureVector& b) {
  if (a.norm() == 0.0 || b.norm() == 0.0) return 0.0;
  return dot(a, b) / (a.norm() * b.norm());
}

std::vector<SharedFeature> shared_features(const FeatureVector& a, const FeatureVector& b) {
  std::vector<SharedFeature> out;
  const auto& x = a.entries();
  const auto& y = b.entries();
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    int c = x[i].first.compare(y[j].first);
    if (c == 0) {
      out.push_back({x[i].first, x[i].second, y[j].second});
      ++i;
      ++j;
    } else if (c < 0) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

}  // namespace egowsd
