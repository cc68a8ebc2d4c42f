#include "survkit/nn.hpp"

#include <cmath>

#include "survkit/error.hpp"

namespace survkit {

void MlpConfig::validate() const {
  require(input_dim >= 1, ErrKind::invalid, "mlp: input_dim must be >= 1");
  require(hidden_dim >= 32 && hidden_dim <= 512, ErrKind::invalid,
          "mlp: hidden_dim must be in [32, 512]");
  require(dropout >= 0.0 && dropout <= 0.5, ErrKind::invalid, "mlp: dropout must be in [0, 0.5]");
}

void TrainConfig::validate() const {
  require(learning_rate >= 1e-5 && learning_rate <= 1e-3, ErrKind::invalid,
          "train: learning_rate must be in [1e-5, 1e-3]");
  require(weight_decay >= 1e-6 && weight_decay <= 1e-2, ErrKind::invalid,
          "train: weight_decay must be in [1e-6, 1e-2]");
  require(l1_penalty >= 1e-6 && l1_penalty <= 1e-2, ErrKind::invalid,
          "train: l1_penalty must be in [1e-6, 1e-2]");
  require(lr_floor >= 1e-6 && lr_floor <= 1e-2, ErrKind::invalid,
          "train: lr_floor must be in [1e-6, 1e-2]");
  require(max_epochs >= 1 && max_epochs <= 200, ErrKind::invalid,
          "train: max_epochs must be in [1, 200]");
  require(patience >= 1, ErrKind::invalid, "train: patience must be >= 1");
  require(batch_size >= 2, ErrKind::invalid, "train: batch_size must be >= 2");
  require(warmup_epochs >= 0 && warmup_epochs < max_epochs, ErrKind::invalid,
          "train: warmup_epochs must be in [0, max_epochs)");
}

MlpParams init_params(const MlpConfig& config) {
  config.validate();
  Rng rng(config.seed);
  MlpParams p;
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(config.input_dim));
  p.w1.resize(config.hidden_dim, config.input_dim);
  for (int r = 0; r < config.hidden_dim; ++r) {
    for (int c = 0; c < config.input_dim; ++c) p.w1(r, c) = rng.uniform(-bound1, bound1);
  }
  p.b1 = Eigen::VectorXd::Zero(config.hidden_dim);
  p.ln_gain = Eigen::VectorXd::Ones(config.hidden_dim);
  p.ln_bias = Eigen::VectorXd::Zero(config.hidden_dim);
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(config.hidden_dim));
  p.w2.resize(config.hidden_dim);
  for (int c = 0; c < config.hidden_dim; ++c) p.w2(c) = rng.uniform(-bound2, bound2);
  p.b2 = 0.0;
  return p;
}

namespace {

// Shared forward body. `mask` empty means no dropout is applied.
Eigen::VectorXd forward_impl(const MlpParams& p, const Eigen::MatrixXd& x, MlpCache* cache,
                             const Eigen::MatrixXd* mask) {
  require(x.cols() == p.w1.cols(), ErrKind::dim_mismatch,
          "mlp forward: input has " + std::to_string(x.cols()) + " columns, expected " +
              std::to_string(p.w1.cols()));
  const Eigen::Index batch = x.rows();
  const Eigen::Index hidden = p.w1.rows();

  Eigen::MatrixXd h = x * p.w1.transpose();
  h.rowwise() += p.b1.transpose();

  // layernorm per row: mean 0 / variance 1 (population, eps inside the sqrt)
  Eigen::MatrixXd hhat(batch, hidden);
  Eigen::VectorXd inv_std(batch);
  for (Eigen::Index r = 0; r < batch; ++r) {
    const double mu = h.row(r).mean();
    const double var = (h.row(r).array() - mu).square().mean();
    const double inv = 1.0 / std::sqrt(var + kLayerNormEps);
    inv_std[r] = inv;
    hhat.row(r) = (h.row(r).array() - mu) * inv;
  }

  Eigen::MatrixXd lin = hhat.array().rowwise() * p.ln_gain.transpose().array();
  lin.rowwise() += p.ln_bias.transpose();

  Eigen::MatrixXd act = lin.cwiseMax(0.0);
  if (mask != nullptr && mask->size() > 0) act = act.cwiseProduct(*mask);

  Eigen::VectorXd eta = act * p.w2.transpose();
  eta.array() += p.b2;

  if (cache != nullptr) {
    cache->x = x;
    cache->hhat = std::move(hhat);
    cache->inv_std = std::move(inv_std);
    cache->lin = std::move(lin);
    cache->act = std::move(act);
  }
  return eta;
}

}  // namespace

Eigen::VectorXd mlp_forward_eval(const MlpParams& params, const Eigen::MatrixXd& x) {
  return forward_impl(params, x, nullptr, nullptr);
}

Eigen::VectorXd mlp_forward_train(const MlpParams& params, const Eigen::MatrixXd& x,
                                  double dropout, Rng& rng, MlpCache& cache) {
  if (dropout > 0.0) {
    const double keep = 1.0 - dropout;
    cache.mask.resize(x.rows(), params.w1.rows());
    for (Eigen::Index r = 0; r < cache.mask.rows(); ++r) {
      for (Eigen::Index c = 0; c < cache.mask.cols(); ++c) {
        cache.mask(r, c) = rng.bernoulli(keep) ? 1.0 / keep : 0.0;
      }
    }
  } else {
    cache.mask.resize(0, 0);
  }
  return forward_impl(params, x, &cache, &cache.mask);
}

Eigen::VectorXd mlp_forward_reuse(const MlpParams& params, MlpCache& cache) {
  return forward_impl(params, cache.x, &cache, &cache.mask);
}

MlpGrads mlp_backward(const MlpParams& p, const MlpCache& cache, const Eigen::VectorXd& d_eta,
                      Eigen::MatrixXd* dx) {
  const Eigen::Index batch = cache.x.rows();
  const Eigen::Index hidden = p.w1.rows();

  MlpGrads g;
  g.b2 = d_eta.sum();
  g.w2 = d_eta.transpose() * cache.act;

  Eigen::MatrixXd d_act = d_eta * p.w2;  // batch x hidden
  if (cache.mask.size() > 0) d_act = d_act.cwiseProduct(cache.mask);
  Eigen::MatrixXd d_lin =
      (cache.lin.array() > 0.0).select(d_act, Eigen::MatrixXd::Zero(batch, hidden));

  g.ln_gain = (d_lin.cwiseProduct(cache.hhat)).colwise().sum();
  g.ln_bias = d_lin.colwise().sum();

  // layernorm backward
  Eigen::MatrixXd d_hhat = d_lin.array().rowwise() * p.ln_gain.transpose().array();
  Eigen::MatrixXd d_h(batch, hidden);
  for (Eigen::Index r = 0; r < batch; ++r) {
    const double mean_d = d_hhat.row(r).mean();
    const double mean_dh = (d_hhat.row(r).cwiseProduct(cache.hhat.row(r))).mean();
    d_h.row(r) =
        cache.inv_std[r] * (d_hhat.row(r).array() - mean_d - cache.hhat.row(r).array() * mean_dh);
  }

  g.w1 = d_h.transpose() * cache.x;
  g.b1 = d_h.colwise().sum();
  if (dx != nullptr) *dx = d_h * p.w1;
  return g;
}

double lr_schedule(int epoch, const TrainConfig& cfg) {
  require(epoch >= 0, ErrKind::invalid, "lr_schedule: epoch must be >= 0");
  if (epoch < cfg.warmup_epochs) {
    return cfg.learning_rate * static_cast<double>(epoch + 1) /
           static_cast<double>(cfg.warmup_epochs);
  }
  const int span = cfg.max_epochs - cfg.warmup_epochs;
  const int t = std::min(epoch, cfg.max_epochs) - cfg.warmup_epochs;
  const double phase = M_PI * static_cast<double>(t) / static_cast<double>(span);
  return cfg.lr_floor + 0.5 * (cfg.learning_rate - cfg.lr_floor) * (1.0 + std::cos(phase));
}

}  // namespace survkit
