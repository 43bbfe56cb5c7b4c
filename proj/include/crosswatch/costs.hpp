#pragma once

#include <optional>

#include <crosswatch/detection.hpp>

namespace crosswatch {

/// Appearance dissimilarity: 1 - Pearson correlation of the two histograms,
/// clamped to [0,1]. A flat (zero-variance) histogram makes the correlation
/// undefined; the cost is then the neutral 0.5 and `degenerate` is set.
double appearance_cost(const AppearanceHistogram& a,
                       const AppearanceHistogram& b,
                       bool* degenerate = nullptr);

/// Size dissimilarity from box width/height, in [0,1).
double size_cost(const BoundingBox& a, const BoundingBox& b);

/// Center-position dissimilarity normalized by coordinate sums, in [0,1].
/// An axis whose coordinates sum to zero contributes 0.
double position_cost(const BoundingBox& a, const BoundingBox& b);

/// Jaccard distance: 1 - IOU, in [0,1].
double jaccard_cost(const BoundingBox& a, const BoundingBox& b);

/// Contribution of each dissimilarity term to the total cost. Normalized to
/// sum to 1 on construction.
struct CostWeights {
  double appearance = 0.25;
  double size = 0.25;
  double position = 0.25;
  double jaccard = 0.25;

  static CostWeights normalized(double w_a, double w_s, double w_p,
                                double w_k);
};

/// Weighted sum of the four terms. When `appearance_valid` is false the
/// appearance weight is redistributed proportionally over the other three.
double weighted_total(double c_appearance, double c_size, double c_position,
                      double c_jaccard, const CostWeights& w,
                      bool appearance_valid = true);

/// Full dissimilarity between a track (box reconstructed from its filtered
/// state, plus its running histogram) and a detection.
double total_cost(const BoundingBox& track_box,
                  const std::optional<AppearanceHistogram>& track_hist,
                  const Detection& det, const CostWeights& w);

}  // namespace crosswatch
