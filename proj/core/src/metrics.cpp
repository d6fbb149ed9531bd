#include "stelnet/metrics.hpp"

#include "stelnet/errors.hpp"

#include <algorithm>
#include <iterator>
#include <vector>

namespace stelnet {

ConfusionCounts confusion(const EdgeSet& estimated, const EdgeSet& truth) {
  if (estimated.nodes() != truth.nodes()) {
    throw ShapeError("confusion: estimated has " + std::to_string(estimated.nodes()) + " nodes, truth has " +
                     std::to_string(truth.nodes()));
  }
  std::vector<Edge> common;
  std::set_intersection(estimated.edges().begin(), estimated.edges().end(), truth.edges().begin(),
                        truth.edges().end(), std::back_inserter(common));
  const auto p = static_cast<std::int64_t>(truth.nodes());
  ConfusionCounts c;
  c.tp = static_cast<std::int64_t>(common.size());
  c.fp = static_cast<std::int64_t>(estimated.size()) - c.tp;
  c.fn = static_cast<std::int64_t>(truth.size()) - c.tp;
  c.tn = p * (p - 1) / 2 - c.tp - c.fp - c.fn;
  return c;
}

double precision(const ConfusionCounts& c) {
  return c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

double recall(const ConfusionCounts& c) {
  return c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

double f1(const ConfusionCounts& c) {
  if (c.tp == 0) return (c.fp == 0 && c.fn == 0) ? 1.0 : 0.0;
  const double pr = precision(c);
  const double rc = recall(c);
  return 2.0 * pr * rc / (pr + rc);
}

double frobenius_partial_corr(const PartialCorrelationMatrix& p, const PartialCorrelationMatrix& q) {
  if (p.dim() != q.dim()) throw ShapeError("frobenius_partial_corr: dimensions differ");
  return (p.matrix() - q.matrix()).norm();
}

}  // namespace stelnet
