#pragma once

#include <optional>
#include <string>
#include <vector>

#include "survkit/fusion.hpp"
#include "survkit/nn.hpp"
#include "survkit/survival.hpp"

namespace survkit {

enum class ModelKind { unimodal, intermediate };

// A trainable risk predictor: the MLP head, plus the CT projection when the
// model consumes a concatenated multimodal input.
struct RiskModel {
  ModelKind kind = ModelKind::unimodal;
  std::string modality;  // unimodal input modality ("wsi" or "ct")
  std::optional<CtProjection> projection;
  MlpConfig config;
  MlpParams params;
};

RiskModel init_unimodal_model(const std::string& modality, int input_dim, int hidden_dim,
                              double dropout, std::uint64_t seed);
RiskModel init_intermediate_model(int wsi_dim, int ct_dim, int hidden_dim, double dropout,
                                  std::uint64_t seed);

// Design matrices for one patient subset. Unimodal models read `primary`
// only; intermediate models read `primary` (WSI rows) and `ct`.
struct ModelInputs {
  Eigen::MatrixXd primary;
  Eigen::MatrixXd ct;
};

struct TrainDataset {
  ModelInputs x;
  SurvivalData outcomes;
};

Eigen::VectorXd model_predict(const RiskModel& model, const ModelInputs& x);

// Parameter blocks in a fixed order (projection first when present); the
// `weight` flag marks the matrices that receive weight decay and L1.
struct ParamBlock {
  double* data = nullptr;
  Eigen::Index size = 0;
  bool weight = false;
};

std::vector<ParamBlock> param_blocks(RiskModel& model);
Eigen::Index param_count(const RiskModel& model);
RiskModel zeros_like(const RiskModel& model);

Eigen::VectorXd flatten_params(const RiskModel& model);
void unflatten_params(RiskModel& model, const Eigen::VectorXd& theta);

struct ModelCache {
  Eigen::MatrixXd x_ct;  // raw CT rows (intermediate models)
  MlpCache mlp;
};

Eigen::VectorXd model_forward_train(const RiskModel& model, const ModelInputs& x, Rng& rng,
                                    ModelCache& cache);
// Reuses cache.x_ct / cache.mlp.mask so perturbed parameters see the same
// dropout realization (finite-difference hook).
Eigen::VectorXd model_forward_reuse(const RiskModel& model, ModelCache& cache);

// Gradients stored in a parameter-shaped model, aligned with param_blocks.
void model_backward(const RiskModel& model, const ModelCache& cache, const Eigen::VectorXd& d_eta,
                    RiskModel& grads);

// Full objective on one batch with the dropout mask held in `cache`:
// in-batch Cox loss plus l1_penalty * sum|weights|. Gradients land in `grads`.
double model_loss_and_grad(const RiskModel& model, const TrainDataset& batch, double l1_penalty,
                           ModelCache& cache, RiskModel& grads);

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long t = 0;
};

AdamState make_adam_state(const RiskModel& model);

// One Adam step (beta1 0.9, beta2 0.999, eps 1e-8) with decoupled weight
// decay on weight matrices only. Returns the batch loss, or nullopt when the
// batch holds no events (parameters untouched).
std::optional<double> train_step(RiskModel& model, AdamState& adam, const TrainDataset& batch,
                                 const TrainConfig& cfg, double lr, Rng& rng);

struct EpochStats {
  double train_loss = 0.0;
  double val_cindex = 0.0;
  double lr = 0.0;
};

struct TrainResult {
  RiskModel model;  // best-validation snapshot
  int best_epoch = 0;
  double best_val_cindex = 0.0;
  std::vector<EpochStats> history;
};

// Minibatch epochs with seeded shuffling; stops after `patience` epochs
// without a validation C-index improvement of more than 1e-6, or at
// max_epochs. Validation outcomes are touched only by that C-index.
TrainResult train_with_early_stopping(RiskModel model, const TrainDataset& train,
                                      const TrainDataset& val, const TrainConfig& cfg);

// Same epoch loop, fixed length, no validation. Used for the outer-fold
// retrain once the epoch count has been selected.
RiskModel train_for_epochs(RiskModel model, const TrainDataset& train, const TrainConfig& cfg,
                           int epochs);

bool has_comparable_pair(const SurvivalData& data);

}  // namespace survkit
