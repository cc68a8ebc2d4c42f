#pragma once

#include <vector>

#include <Eigen/Dense>

#include "survkit/survival_data.hpp"

namespace survkit {

// R(T_i) for one observed event: every patient whose observed time is >= T_i.
// Censored patients with time exactly equal to the event time are included.
struct RiskSet {
  int event_index = -1;
  std::vector<int> members;
};

// One risk set per event, in index order. Tied event times get identical
// member sets (Breslow convention).
std::vector<RiskSet> risk_sets(const SurvivalData& data);

// Negative Cox log partial likelihood:
//   -sum_{i: event} ( eta_i - log sum_{j in R(T_i)} exp(eta_j) )
// Log-sum-exp is max-shifted, so the value is finite for any finite eta.
double cox_loss(const Eigen::VectorXd& eta, const SurvivalData& data);

// Analytic d(cox_loss)/d(eta); components sum to zero in exact arithmetic.
Eigen::VectorXd cox_loss_grad(const Eigen::VectorXd& eta, const SurvivalData& data);

// Loss and gradient in one pass; the pair shares the risk-set softmaxes.
double cox_loss_with_grad(const Eigen::VectorXd& eta, const SurvivalData& data,
                          Eigen::VectorXd& grad_out);

}  // namespace survkit
