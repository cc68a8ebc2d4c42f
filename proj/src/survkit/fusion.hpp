#pragma once

#include <vector>

#include <Eigen/Dense>

#include "survkit/survival_data.hpp"

namespace survkit {

// Post-hoc convex combination of per-modality risk scores:
//   R = alpha * R_wsi + (1 - alpha) * R_ct
Eigen::VectorXd late_fuse(const Eigen::VectorXd& r_wsi, const Eigen::VectorXd& r_ct, double alpha);

// Grid {0, step, 2*step, ..., 1}; the endpoint is always included.
std::vector<double> alpha_grid(double step);

// Grid point maximizing the validation C-index of the fused scores; ties go
// to the larger alpha (favors the WSI side).
double tune_alpha(const Eigen::VectorXd& r_wsi, const Eigen::VectorXd& r_ct,
                  const SurvivalData& val, double grid_step);

// Same rule over several validation folds, scoring each grid point by the
// mean fold C-index.
double tune_alpha_folds(const std::vector<Eigen::VectorXd>& r_wsi,
                        const std::vector<Eigen::VectorXd>& r_ct,
                        const std::vector<SurvivalData>& vals, double grid_step);

// Trainable linear map from the CT embedding space onto the WSI embedding
// dimension. No activation; gradients flow through during joint training.
struct CtProjection {
  Eigen::MatrixXd w;  // wsi_dim x ct_dim
  Eigen::VectorXd b;  // wsi_dim
};

Eigen::VectorXd ct_project(const CtProjection& p, const Eigen::VectorXd& e_ct);
Eigen::MatrixXd ct_project_rows(const CtProjection& p, const Eigen::MatrixXd& x_ct);

// Joint representation: WSI block first, projected CT block second.
Eigen::VectorXd concat_embeddings(const Eigen::VectorXd& e_wsi, const Eigen::VectorXd& e_ct_proj);

}  // namespace survkit
