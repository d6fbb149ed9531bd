#pragma once

#include "stelnet/model_core.hpp"

#include <cstdint>

namespace stelnet {

/// Edge classification counts over all p(p-1)/2 unordered pairs.
struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Throws ShapeError when the node counts differ.
ConfusionCounts confusion(const EdgeSet& estimated, const EdgeSet& truth);

double precision(const ConfusionCounts& c);
double recall(const ConfusionCounts& c);

/// Harmonic mean of precision and recall. 1 when TP = FP = FN = 0; 0 when
/// TP = 0 and anything was missed or wrongly included.
double f1(const ConfusionCounts& c);

/// sqrt(sum_jk (p_jk - q_jk)^2) over all entries, both triangles included.
double frobenius_partial_corr(const PartialCorrelationMatrix& p, const PartialCorrelationMatrix& q);

}  // namespace stelnet
