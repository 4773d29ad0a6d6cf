#include "p2pss/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace p2pss {

RunMetrics score(const FrequentReport& report, const GroundTruth& truth) {
  RunMetrics m;
  m.reported = report.entries.size();
  m.frequent = truth.frequent.size();
  double err_sum = 0.0;
  for (const auto& [item, estimate] : report.entries) {
    const std::uint64_t f = truth.count(item);
    if (f == 0) {
      throw std::invalid_argument("reported item " + std::to_string(item) +
                                  " never occurs in the stream");
    }
    if (truth.is_frequent(item)) ++m.true_positives;
    err_sum += std::abs(estimate - static_cast<double>(f)) / static_cast<double>(f);
  }
  m.recall = m.frequent == 0 ? 1.0
                             : static_cast<double>(m.true_positives) / static_cast<double>(m.frequent);
  m.precision = m.reported == 0
                    ? 1.0
                    : static_cast<double>(m.true_positives) / static_cast<double>(m.reported);
  m.are = m.reported == 0 ? 0.0 : err_sum / static_cast<double>(m.reported);
  return m;
}

Aggregate aggregate(std::span<const double> values) {
  Aggregate a;
  double sum = 0.0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++a.count;
  }
  if (a.count == 0) {
    a.mean = std::nan("");
    return a;
  }
  a.mean = sum / static_cast<double>(a.count);
  if (a.count < 2) return a;
  double ss = 0.0;
  for (double v : values) {
    if (!std::isnan(v)) ss += (v - a.mean) * (v - a.mean);
  }
  const double sd = std::sqrt(ss / static_cast<double>(a.count - 1));
  a.ci_halfwidth = 1.96 * sd / std::sqrt(static_cast<double>(a.count));
  return a;
}

MetricsAggregate aggregate(std::span<const RunMetrics> runs) {
  std::vector<double> recall, precision, are;
  for (const auto& r : runs) {
    recall.push_back(r.recall);
    precision.push_back(r.precision);
    are.push_back(r.are);
  }
  return {aggregate(recall), aggregate(precision), aggregate(are)};
}

BoundCheck bound_check(const FrequentReport& report, const GroundTruth& truth,
                       const PlanInputs& inputs, const Plan& plan) {
  const double e = report.eps_star;
  if (!(e >= 0.0 && e < 1.0)) throw std::invalid_argument("bound check needs eps* in [0, 1)");
  BoundCheck out;
  out.tolerance = tolerance(static_cast<double>(plan.k), plan.rounds, inputs);
  const double n = static_cast<double>(truth.n);
  const double floor_freq = (inputs.phi - out.tolerance) * n;
  for (const auto& [item, estimate] : report.entries) {
    ItemBoundCheck c;
    c.item = item;
    c.true_freq = truth.count(item);
    c.estimate = estimate;
    const double f = static_cast<double>(c.true_freq);
    c.lower = (1.0 - e) / (1.0 + e) * f;
    c.upper = (1.0 + e) / (1.0 - e) * (f + n / static_cast<double>(plan.k));
    c.sandwich_ok = c.lower <= estimate && estimate <= c.upper;
    c.floor_ok = f > floor_freq;
    if (!c.sandwich_ok) ++out.sandwich_violations;
    if (!c.floor_ok) ++out.floor_violations;
    out.items.push_back(c);
  }
  return out;
}

}  // namespace p2pss
