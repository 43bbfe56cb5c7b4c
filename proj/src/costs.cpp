#include <crosswatch/costs.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crosswatch {

double appearance_cost(const AppearanceHistogram& a,
                       const AppearanceHistogram& b, bool* degenerate) {
  if (degenerate) *degenerate = false;
  const auto& ha = a.bins;
  const auto& hb = b.bins;
  if (ha.size() != hb.size() || ha.empty())
    throw std::invalid_argument("histogram lengths differ");

  const std::size_t n = ha.size();
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += ha[i];
    mean_b += hb[i];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);

  double cross = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = ha[i] - mean_a;
    const double db = hb[i] - mean_b;
    cross += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a <= 0.0 || var_b <= 0.0) {
    if (degenerate) *degenerate = true;
    return 0.5;
  }
  const double corr = cross / std::sqrt(var_a * var_b);
  return std::clamp(1.0 - corr, 0.0, 1.0);
}

double size_cost(const BoundingBox& a, const BoundingBox& b) {
  const double dh = std::abs(a.h - b.h) / (a.h + b.h);
  const double dw = std::abs(a.w - b.w) / (a.w + b.w);
  return 0.5 * (dh + dw);
}

double position_cost(const BoundingBox& a, const BoundingBox& b) {
  const double sx = a.x + b.x;
  const double sy = a.y + b.y;
  const double dx = sx > 0.0 ? std::abs(a.x - b.x) / sx : 0.0;
  const double dy = sy > 0.0 ? std::abs(a.y - b.y) / sy : 0.0;
  return 0.5 * (dx + dy);
}

double jaccard_cost(const BoundingBox& a, const BoundingBox& b) {
  return 1.0 - iou(a, b);
}

CostWeights CostWeights::normalized(double w_a, double w_s, double w_p,
                                    double w_k) {
  if (w_a < 0.0 || w_s < 0.0 || w_p < 0.0 || w_k < 0.0)
    throw std::invalid_argument("cost weights must be non-negative");
  const double sum = w_a + w_s + w_p + w_k;
  if (sum <= 0.0) throw std::invalid_argument("cost weights sum to zero");
  return CostWeights{w_a / sum, w_s / sum, w_p / sum, w_k / sum};
}

double weighted_total(double c_appearance, double c_size, double c_position,
                      double c_jaccard, const CostWeights& w,
                      bool appearance_valid) {
  if (appearance_valid) {
    return w.appearance * c_appearance + w.size * c_size +
           w.position * c_position + w.jaccard * c_jaccard;
  }
  const double rest = w.size + w.position + w.jaccard;
  if (rest <= 0.0) {
    // Appearance-only weights with no histogram available: fall back to an
    // even split over the geometric terms.
    return (c_size + c_position + c_jaccard) / 3.0;
  }
  return (w.size * c_size + w.position * c_position + w.jaccard * c_jaccard) /
         rest;
}

double total_cost(const BoundingBox& track_box,
                  const std::optional<AppearanceHistogram>& track_hist,
                  const Detection& det, const CostWeights& w) {
  const bool appearance_valid = track_hist.has_value() && det.histogram.has_value();
  const double c_a =
      appearance_valid ? appearance_cost(*track_hist, *det.histogram) : 0.0;
  return weighted_total(c_a, size_cost(track_box, det.box),
                        position_cost(track_box, det.box),
                        jaccard_cost(track_box, det.box), w, appearance_valid);
}

}  // namespace crosswatch
