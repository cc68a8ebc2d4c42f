#include "survkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "survkit/rng.hpp"

namespace survkit {

double c_index(const SurvivalData& data, const Eigen::VectorXd& eta) {
  data.validate();
  require(static_cast<std::size_t>(eta.size()) == data.size(), ErrKind::invalid,
          "c_index: score / data length mismatch");
  const int n = static_cast<int>(data.size());
  double comparable = 0.0;
  double concordant = 0.0;
  for (int j = 0; j < n; ++j) {
    if (!data.event[static_cast<std::size_t>(j)]) continue;
    for (int i = 0; i < n; ++i) {
      if (data.time[static_cast<std::size_t>(j)] >= data.time[static_cast<std::size_t>(i)]) {
        continue;
      }
      comparable += 1.0;
      if (eta[j] > eta[i]) {
        concordant += 1.0;
      } else if (eta[j] == eta[i]) {
        concordant += 0.5;
      }
    }
  }
  require(comparable > 0.0, ErrKind::degenerate, "c_index: no comparable pairs");
  return concordant / comparable;
}

namespace {

// Half the smallest gap between distinct scores, or 1.0 when all scores tie.
double tie_safe_jitter_bound(const Eigen::VectorXd& eta) {
  std::vector<double> sorted(eta.data(), eta.data() + eta.size());
  std::sort(sorted.begin(), sorted.end());
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double gap = sorted[i] - sorted[i - 1];
    if (gap > 0.0) min_gap = std::min(min_gap, gap);
  }
  if (!std::isfinite(min_gap)) return 1.0;
  return 0.25 * min_gap;
}

}  // namespace

MetricSummary c_index_random_ties(const SurvivalData& data, const Eigen::VectorXd& eta,
                                  int n_repeats, std::uint64_t seed) {
  require(n_repeats >= 2, ErrKind::invalid, "c_index_random_ties: n_repeats must be >= 2");
  const double bound = tie_safe_jitter_bound(eta);
  Rng rng(seed);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n_repeats));
  Eigen::VectorXd jittered(eta.size());
  for (int r = 0; r < n_repeats; ++r) {
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      jittered[i] = eta[i] + rng.uniform(-bound, bound);
    }
    values.push_back(c_index(data, jittered));
  }
  return summarize_folds(values);
}

double auroc_horizon(const SurvivalData& data, const Eigen::VectorXd& eta,
                     double horizon_months) {
  data.validate();
  require(static_cast<std::size_t>(eta.size()) == data.size(), ErrKind::invalid,
          "auroc: score / data length mismatch");
  require(horizon_months > 0.0, ErrKind::invalid, "auroc: horizon must be positive");

  std::vector<int> pos, neg;
  for (int i = 0; i < static_cast<int>(data.size()); ++i) {
    const double t = data.time[static_cast<std::size_t>(i)];
    const bool ev = data.event[static_cast<std::size_t>(i)] != 0;
    if (t > horizon_months) {
      neg.push_back(i);
    } else if (ev) {
      pos.push_back(i);
    }
    // censored at or before the horizon: excluded
  }
  require(!pos.empty(), ErrKind::degenerate, "auroc: no positive patients at this horizon");
  require(!neg.empty(), ErrKind::degenerate, "auroc: no negative patients at this horizon");

  double hits = 0.0;
  for (int p : pos) {
    for (int q : neg) {
      if (eta[p] > eta[q]) {
        hits += 1.0;
      } else if (eta[p] == eta[q]) {
        hits += 0.5;
      }
    }
  }
  return hits / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

MetricSummary summarize_folds(const std::vector<double>& values) {
  require(!values.empty(), ErrKind::invalid, "summarize_folds: empty input");
  MetricSummary s;
  s.per_fold = values;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(values.size()));
  return s;
}

std::string format_summary(const MetricSummary& s) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f±%.3f", s.mean, s.std);
  return buf;
}

}  // namespace survkit
