#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "p2pss/planner.hpp"
#include "p2pss/protocol.hpp"
#include "p2pss/workload.hpp"

namespace p2pss {

struct RunMetrics {
  double recall = 1.0;
  double precision = 1.0;
  /// Mean |f^s - f| / f over reported items; 0 for an empty report.
  double are = 0.0;
  std::size_t reported = 0;
  std::size_t true_positives = 0;
  std::size_t frequent = 0;
};

/// Recall and precision against the exact frequent set; recall is 1 when
/// that set is empty and precision is 1 when nothing is reported.
RunMetrics score(const FrequentReport& report, const GroundTruth& truth);

struct Aggregate {
  double mean = 0.0;
  /// 95% normal-approximation half-width: 1.96 s / sqrt(count).
  double ci_halfwidth = 0.0;
  std::size_t count = 0;
};

/// NaN entries are skipped.
Aggregate aggregate(std::span<const double> values);

struct MetricsAggregate {
  Aggregate recall;
  Aggregate precision;
  Aggregate are;
};

MetricsAggregate aggregate(std::span<const RunMetrics> runs);

struct ItemBoundCheck {
  ItemId item = 0;
  std::uint64_t true_freq = 0;
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool sandwich_ok = true;
  /// False when the item's true frequency is at or below (phi - eps) n.
  bool floor_ok = true;
};

struct BoundCheck {
  std::vector<ItemBoundCheck> items;
  double tolerance = 0.0;
  std::size_t sandwich_violations = 0;
  std::size_t floor_violations = 0;

  bool sandwich_ok() const { return sandwich_violations == 0; }
  bool floor_ok() const { return floor_violations == 0; }
};

/**
 * Checks a report against the frequency-estimation envelope
 *   (1-e)/(1+e) f <= f^s <= (1+e)/(1-e) (f + n/k)
 * with e = report.eps_star, and against the false-positive floor: no
 * reported item may have f <= (phi - eps) n, eps = tolerance(plan.k,
 * plan.rounds, inputs). Requires report.eps_star < 1.
 */
BoundCheck bound_check(const FrequentReport& report, const GroundTruth& truth,
                       const PlanInputs& inputs, const Plan& plan);

}  // namespace p2pss
