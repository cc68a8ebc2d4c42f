#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "survkit/survival_data.hpp"

namespace survkit {

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // population std over per_fold
  std::vector<double> per_fold;
};

// Harrell's C-index per Eq.-style pair counting: over ordered pairs (j, i)
// with T_j < T_i and delta_j = 1, count eta_j > eta_i as 1, equality as 0.5.
// Pairs tied in time are not comparable. Throws degenerate if no comparable
// pair exists.
double c_index(const SurvivalData& data, const Eigen::VectorXd& eta);

// C-index with prediction ties broken uniformly at random: each repeat adds
// i.i.d. uniform jitter with magnitude strictly below half the smallest
// nonzero gap between distinct scores, so only tied pairs can reorder.
// per_fold holds the per-repeat values.
MetricSummary c_index_random_ties(const SurvivalData& data, const Eigen::VectorXd& eta,
                                  int n_repeats, std::uint64_t seed);

// AUROC for event-within-horizon classification. Positive: event at or
// before the horizon. Negative: observed time beyond the horizon (event or
// censored). Censored at or before the horizon: excluded.
double auroc_horizon(const SurvivalData& data, const Eigen::VectorXd& eta,
                     double horizon_months = 60.0);

// Mean and population standard deviation over fold-level values.
MetricSummary summarize_folds(const std::vector<double>& values);

// "0.775±0.044" style, three decimals.
std::string format_summary(const MetricSummary& s);

}  // namespace survkit
