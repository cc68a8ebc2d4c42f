#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "survkit/rng.hpp"

namespace survkit {

struct MlpConfig {
  int input_dim = 0;
  int hidden_dim = 64;  // search range [32, 512]
  double dropout = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// One-hidden-layer risk head: linear -> layernorm -> ReLU -> dropout -> linear.
struct MlpParams {
  Eigen::MatrixXd w1;       // hidden x input
  Eigen::VectorXd b1;       // hidden
  Eigen::VectorXd ln_gain;  // hidden
  Eigen::VectorXd ln_bias;  // hidden
  Eigen::RowVectorXd w2;    // 1 x hidden
  double b2 = 0.0;
};

struct TrainConfig {
  double learning_rate = 1e-4;  // [1e-5, 1e-3]
  double weight_decay = 1e-6;   // [1e-6, 1e-2]
  double l1_penalty = 1e-6;     // [1e-6, 1e-2]
  double lr_floor = 1e-6;       // [1e-6, 1e-2]
  int max_epochs = 200;
  int patience = 10;
  int batch_size = 16;
  int warmup_epochs = 10;
  bool full_batch = false;  // one batch per epoch, exact full-cohort risk sets
  std::uint64_t seed = 0;   // shuffle + dropout stream

  void validate() const;
};

// Uniform fan-in init (bound 1/sqrt(fan_in)) for both weight layers,
// zeros for biases, identity layernorm. Deterministic per seed.
MlpParams init_params(const MlpConfig& config);

// Everything the backward pass needs about one forward evaluation.
// `mask` holds inverted-dropout keep factors (0 or 1/keep) and stays empty
// in eval mode or when dropout is 0.
struct MlpCache {
  Eigen::MatrixXd x;        // batch x input
  Eigen::MatrixXd hhat;     // normalized hidden pre-activations
  Eigen::VectorXd inv_std;  // per-row 1/sqrt(var + eps)
  Eigen::MatrixXd lin;      // gain*hhat + bias (pre-ReLU)
  Eigen::MatrixXd act;      // value fed to the output layer
  Eigen::MatrixXd mask;
};

// Eval-mode scores: no dropout, pure function of (params, x).
Eigen::VectorXd mlp_forward_eval(const MlpParams& params, const Eigen::MatrixXd& x);

// Train-mode forward; draws a fresh dropout mask from rng into the cache.
Eigen::VectorXd mlp_forward_train(const MlpParams& params, const Eigen::MatrixXd& x,
                                  double dropout, Rng& rng, MlpCache& cache);

// Recomputes the forward pass from cache.x reusing cache.mask; lets
// finite-difference checks hold the dropout mask fixed.
Eigen::VectorXd mlp_forward_reuse(const MlpParams& params, MlpCache& cache);

struct MlpGrads {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::VectorXd ln_gain;
  Eigen::VectorXd ln_bias;
  Eigen::RowVectorXd w2;
  double b2 = 0.0;
};

// Backprop of d_eta through the cached forward pass. When dx is non-null it
// receives dL/dx (needed to train an upstream projection).
MlpGrads mlp_backward(const MlpParams& params, const MlpCache& cache,
                      const Eigen::VectorXd& d_eta, Eigen::MatrixXd* dx = nullptr);

// Linear warmup to the peak rate, then cosine annealing to the floor over
// the remaining epochs. `epoch` is 0-based; epoch == max_epochs hits the floor.
double lr_schedule(int epoch, const TrainConfig& cfg);

constexpr double kLayerNormEps = 1e-5;

}  // namespace survkit
