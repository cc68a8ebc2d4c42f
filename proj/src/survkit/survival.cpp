#include "survkit/survival.hpp"

#include <algorithm>
#include <cmath>

namespace survkit {

std::vector<RiskSet> risk_sets(const SurvivalData& data) {
  data.validate();
  const int n = static_cast<int>(data.size());
  std::vector<RiskSet> sets;
  for (int i = 0; i < n; ++i) {
    if (!data.event[static_cast<std::size_t>(i)]) continue;
    RiskSet rs;
    rs.event_index = i;
    for (int j = 0; j < n; ++j) {
      if (data.time[static_cast<std::size_t>(j)] >= data.time[static_cast<std::size_t>(i)]) {
        rs.members.push_back(j);
      }
    }
    sets.push_back(std::move(rs));
  }
  require(!sets.empty(), ErrKind::degenerate, "cox: no events in data");
  return sets;
}

namespace {

void check_lengths(const Eigen::VectorXd& eta, const SurvivalData& data) {
  require(static_cast<std::size_t>(eta.size()) == data.size(), ErrKind::invalid,
          "cox: risk score / survival data length mismatch");
}

}  // namespace

double cox_loss(const Eigen::VectorXd& eta, const SurvivalData& data) {
  check_lengths(eta, data);
  const auto sets = risk_sets(data);
  double loss = 0.0;
  for (const auto& rs : sets) {
    double m = -std::numeric_limits<double>::infinity();
    for (int j : rs.members) m = std::max(m, eta[j]);
    double sum = 0.0;
    for (int j : rs.members) sum += std::exp(eta[j] - m);
    loss -= eta[rs.event_index] - (m + std::log(sum));
  }
  return loss;
}

double cox_loss_with_grad(const Eigen::VectorXd& eta, const SurvivalData& data,
                          Eigen::VectorXd& grad_out) {
  check_lengths(eta, data);
  const auto sets = risk_sets(data);
  grad_out = Eigen::VectorXd::Zero(eta.size());
  double loss = 0.0;
  for (const auto& rs : sets) {
    double m = -std::numeric_limits<double>::infinity();
    for (int j : rs.members) m = std::max(m, eta[j]);
    double sum = 0.0;
    for (int j : rs.members) sum += std::exp(eta[j] - m);
    loss -= eta[rs.event_index] - (m + std::log(sum));
    // dL/deta_k = -(1{k = i} - softmax_{R(T_i)}(k))
    grad_out[rs.event_index] -= 1.0;
    for (int j : rs.members) grad_out[j] += std::exp(eta[j] - m) / sum;
  }
  return loss;
}

Eigen::VectorXd cox_loss_grad(const Eigen::VectorXd& eta, const SurvivalData& data) {
  Eigen::VectorXd grad;
  cox_loss_with_grad(eta, data, grad);
  return grad;
}

}  // namespace survkit
