#include "survkit/fusion.hpp"

#include <cmath>

#include "survkit/metrics.hpp"

namespace survkit {

Eigen::VectorXd late_fuse(const Eigen::VectorXd& r_wsi, const Eigen::VectorXd& r_ct, double alpha) {
  require(r_wsi.size() == r_ct.size(), ErrKind::invalid,
          "late_fuse: score vector length mismatch");
  require(alpha >= 0.0 && alpha <= 1.0, ErrKind::invalid, "late_fuse: alpha must be in [0,1]");
  return alpha * r_wsi + (1.0 - alpha) * r_ct;
}

std::vector<double> alpha_grid(double step) {
  require(step > 0.0 && step <= 1.0, ErrKind::invalid, "alpha grid: step must be in (0,1]");
  std::vector<double> grid;
  const int n = static_cast<int>(std::floor(1.0 / step + 1e-9));
  for (int i = 0; i <= n; ++i) grid.push_back(std::min(1.0, static_cast<double>(i) * step));
  if (grid.back() < 1.0) grid.push_back(1.0);
  return grid;
}

double tune_alpha(const Eigen::VectorXd& r_wsi, const Eigen::VectorXd& r_ct,
                  const SurvivalData& val, double grid_step) {
  std::vector<Eigen::VectorXd> w{r_wsi}, c{r_ct};
  std::vector<SurvivalData> v{val};
  return tune_alpha_folds(w, c, v, grid_step);
}

double tune_alpha_folds(const std::vector<Eigen::VectorXd>& r_wsi,
                        const std::vector<Eigen::VectorXd>& r_ct,
                        const std::vector<SurvivalData>& vals, double grid_step) {
  require(!vals.empty() && r_wsi.size() == vals.size() && r_ct.size() == vals.size(),
          ErrKind::invalid, "tune_alpha: fold count mismatch");
  const auto grid = alpha_grid(grid_step);
  double best_alpha = 0.0;
  double best_score = -1.0;
  for (double alpha : grid) {
    double mean = 0.0;
    for (std::size_t f = 0; f < vals.size(); ++f) {
      mean += c_index(vals[f], late_fuse(r_wsi[f], r_ct[f], alpha));
    }
    mean /= static_cast<double>(vals.size());
    if (mean >= best_score) {  // ties resolve toward larger alpha
      best_score = mean;
      best_alpha = alpha;
    }
  }
  return best_alpha;
}

Eigen::VectorXd ct_project(const CtProjection& p, const Eigen::VectorXd& e_ct) {
  require(e_ct.size() == p.w.cols(), ErrKind::dim_mismatch,
          "ct_project: embedding has " + std::to_string(e_ct.size()) + " entries, expected " +
              std::to_string(p.w.cols()));
  return p.w * e_ct + p.b;
}

Eigen::MatrixXd ct_project_rows(const CtProjection& p, const Eigen::MatrixXd& x_ct) {
  require(x_ct.cols() == p.w.cols(), ErrKind::dim_mismatch,
          "ct_project: input has " + std::to_string(x_ct.cols()) + " columns, expected " +
              std::to_string(p.w.cols()));
  Eigen::MatrixXd out = x_ct * p.w.transpose();
  out.rowwise() += p.b.transpose();
  return out;
}

Eigen::VectorXd concat_embeddings(const Eigen::VectorXd& e_wsi, const Eigen::VectorXd& e_ct_proj) {
  require(e_wsi.size() == e_ct_proj.size(), ErrKind::dim_mismatch,
          "concat: projected CT block must match the WSI dimension");
  Eigen::VectorXd out(e_wsi.size() + e_ct_proj.size());
  out << e_wsi, e_ct_proj;
  return out;
}

}  // namespace survkit
