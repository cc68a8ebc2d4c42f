#include "survkit/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "survkit/metrics.hpp"

namespace survkit {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;
constexpr double kImprovementEps = 1e-6;

}  // namespace

RiskModel init_unimodal_model(const std::string& modality, int input_dim, int hidden_dim,
                              double dropout, std::uint64_t seed) {
  RiskModel m;
  m.kind = ModelKind::unimodal;
  m.modality = modality;
  m.config = MlpConfig{input_dim, hidden_dim, dropout, seed};
  m.params = init_params(m.config);
  return m;
}

RiskModel init_intermediate_model(int wsi_dim, int ct_dim, int hidden_dim, double dropout,
                                  std::uint64_t seed) {
  require(wsi_dim >= 1 && ct_dim >= 1, ErrKind::invalid, "intermediate model: dims must be >= 1");
  RiskModel m;
  m.kind = ModelKind::intermediate;
  m.config = MlpConfig{2 * wsi_dim, hidden_dim, dropout, seed};
  m.params = init_params(m.config);
  // projection drawn after the MLP from the same stream, fan-in bound
  Rng rng(derive_seed(seed, 0x70726f6aull));  // "proj"
  CtProjection proj;
  const double bound = 1.0 / std::sqrt(static_cast<double>(ct_dim));
  proj.w.resize(wsi_dim, ct_dim);
  for (int r = 0; r < wsi_dim; ++r) {
    for (int c = 0; c < ct_dim; ++c) proj.w(r, c) = rng.uniform(-bound, bound);
  }
  proj.b = Eigen::VectorXd::Zero(wsi_dim);
  m.projection = std::move(proj);
  return m;
}

namespace {

Eigen::MatrixXd assemble_input(const RiskModel& model, const ModelInputs& x,
                               Eigen::MatrixXd* x_ct_out) {
  if (model.kind == ModelKind::unimodal) {
    return x.primary;
  }
  require(model.projection.has_value(), ErrKind::internal, "intermediate model without projection");
  require(x.primary.rows() == x.ct.rows(), ErrKind::dim_mismatch,
          "intermediate model: WSI/CT row count mismatch");
  if (x_ct_out != nullptr) *x_ct_out = x.ct;
  Eigen::MatrixXd projected = ct_project_rows(*model.projection, x.ct);
  Eigen::MatrixXd joint(x.primary.rows(), x.primary.cols() + projected.cols());
  joint << x.primary, projected;
  return joint;
}

}  // namespace

Eigen::VectorXd model_predict(const RiskModel& model, const ModelInputs& x) {
  return mlp_forward_eval(model.params, assemble_input(model, x, nullptr));
}

std::vector<ParamBlock> param_blocks(RiskModel& model) {
  std::vector<ParamBlock> blocks;
  if (model.projection) {
    blocks.push_back({model.projection->w.data(), model.projection->w.size(), true});
    blocks.push_back({model.projection->b.data(), model.projection->b.size(), false});
  }
  auto& p = model.params;
  blocks.push_back({p.w1.data(), p.w1.size(), true});
  blocks.push_back({p.b1.data(), p.b1.size(), false});
  blocks.push_back({p.ln_gain.data(), p.ln_gain.size(), false});
  blocks.push_back({p.ln_bias.data(), p.ln_bias.size(), false});
  blocks.push_back({p.w2.data(), p.w2.size(), true});
  blocks.push_back({&p.b2, 1, false});
  return blocks;
}

Eigen::Index param_count(const RiskModel& model) {
  Eigen::Index n = 0;
  for (const auto& b : param_blocks(const_cast<RiskModel&>(model))) n += b.size;
  return n;
}

RiskModel zeros_like(const RiskModel& model) {
  RiskModel z = model;
  for (auto& b : param_blocks(z)) std::fill(b.data, b.data + b.size, 0.0);
  return z;
}

Eigen::VectorXd flatten_params(const RiskModel& model) {
  Eigen::VectorXd theta(param_count(model));
  Eigen::Index at = 0;
  for (const auto& b : param_blocks(const_cast<RiskModel&>(model))) {
    std::copy(b.data, b.data + b.size, theta.data() + at);
    at += b.size;
  }
  return theta;
}

void unflatten_params(RiskModel& model, const Eigen::VectorXd& theta) {
  require(theta.size() == param_count(model), ErrKind::invalid,
          "unflatten_params: size mismatch");
  Eigen::Index at = 0;
  for (auto& b : param_blocks(model)) {
    std::copy(theta.data() + at, theta.data() + at + b.size, b.data);
    at += b.size;
  }
}

Eigen::VectorXd model_forward_train(const RiskModel& model, const ModelInputs& x, Rng& rng,
                                    ModelCache& cache) {
  Eigen::MatrixXd joint = assemble_input(model, x, &cache.x_ct);
  return mlp_forward_train(model.params, joint, model.config.dropout, rng, cache.mlp);
}

Eigen::VectorXd model_forward_reuse(const RiskModel& model, ModelCache& cache) {
  if (model.kind == ModelKind::intermediate) {
    Eigen::MatrixXd projected = ct_project_rows(*model.projection, cache.x_ct);
    cache.mlp.x.rightCols(projected.cols()) = projected;
  }
  return mlp_forward_reuse(model.params, cache.mlp);
}

void model_backward(const RiskModel& model, const ModelCache& cache, const Eigen::VectorXd& d_eta,
                    RiskModel& grads) {
  Eigen::MatrixXd dx;
  MlpGrads g = mlp_backward(model.params, cache.mlp, d_eta,
                            model.kind == ModelKind::intermediate ? &dx : nullptr);
  grads.params.w1 = std::move(g.w1);
  grads.params.b1 = std::move(g.b1);
  grads.params.ln_gain = std::move(g.ln_gain);
  grads.params.ln_bias = std::move(g.ln_bias);
  grads.params.w2 = std::move(g.w2);
  grads.params.b2 = g.b2;
  if (model.kind == ModelKind::intermediate) {
    const Eigen::Index wsi_dim = model.projection->w.rows();
    Eigen::MatrixXd d_proj = dx.rightCols(wsi_dim);  // dL/d(projected block)
    grads.projection->w = d_proj.transpose() * cache.x_ct;
    grads.projection->b = d_proj.colwise().sum();
  }
}

double model_loss_and_grad(const RiskModel& model, const TrainDataset& batch, double l1_penalty,
                           ModelCache& cache, RiskModel& grads) {
  Eigen::VectorXd eta = model_forward_reuse(model, cache);
  Eigen::VectorXd d_eta;
  double loss = cox_loss_with_grad(eta, batch.outcomes, d_eta);
  model_backward(model, cache, d_eta, grads);
  if (l1_penalty > 0.0) {
    auto model_blocks = param_blocks(const_cast<RiskModel&>(model));
    auto grad_blocks = param_blocks(grads);
    for (std::size_t i = 0; i < model_blocks.size(); ++i) {
      if (!model_blocks[i].weight) continue;
      for (Eigen::Index k = 0; k < model_blocks[i].size; ++k) {
        const double w = model_blocks[i].data[k];
        loss += l1_penalty * std::abs(w);
        grad_blocks[i].data[k] += l1_penalty * (w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0));
      }
    }
  }
  return loss;
}

AdamState make_adam_state(const RiskModel& model) {
  AdamState s;
  s.m = Eigen::VectorXd::Zero(param_count(model));
  s.v = Eigen::VectorXd::Zero(param_count(model));
  s.t = 0;
  return s;
}

std::optional<double> train_step(RiskModel& model, AdamState& adam, const TrainDataset& batch,
                                 const TrainConfig& cfg, double lr, Rng& rng) {
  if (batch.outcomes.n_events() == 0) return std::nullopt;

  ModelCache cache;
  model_forward_train(model, batch.x, rng, cache);
  RiskModel grads = zeros_like(model);
  const double loss = model_loss_and_grad(model, batch, cfg.l1_penalty, cache, grads);

  adam.t += 1;
  const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(adam.t));
  const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(adam.t));

  auto model_blocks = param_blocks(model);
  auto grad_blocks = param_blocks(grads);
  Eigen::Index at = 0;
  for (std::size_t i = 0; i < model_blocks.size(); ++i) {
    for (Eigen::Index k = 0; k < model_blocks[i].size; ++k, ++at) {
      const double g = grad_blocks[i].data[k];
      adam.m[at] = kAdamBeta1 * adam.m[at] + (1.0 - kAdamBeta1) * g;
      adam.v[at] = kAdamBeta2 * adam.v[at] + (1.0 - kAdamBeta2) * g * g;
      const double mhat = adam.m[at] / bc1;
      const double vhat = adam.v[at] / bc2;
      double update = lr * mhat / (std::sqrt(vhat) + kAdamEps);
      if (model_blocks[i].weight) update += lr * cfg.weight_decay * model_blocks[i].data[k];
      model_blocks[i].data[k] -= update;
    }
  }
  return loss;
}

bool has_comparable_pair(const SurvivalData& data) {
  for (std::size_t j = 0; j < data.size(); ++j) {
    if (!data.event[j]) continue;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.time[j] < data.time[i]) return true;
    }
  }
  return false;
}

namespace {

ModelInputs slice_inputs(const RiskModel& model, const ModelInputs& x,
                         const std::vector<int>& rows) {
  ModelInputs out;
  out.primary.resize(static_cast<Eigen::Index>(rows.size()), x.primary.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.primary.row(static_cast<Eigen::Index>(r)) = x.primary.row(rows[r]);
  if (model.kind == ModelKind::intermediate) {
    out.ct.resize(static_cast<Eigen::Index>(rows.size()), x.ct.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) out.ct.row(static_cast<Eigen::Index>(r)) = x.ct.row(rows[r]);
  }
  return out;
}

// One pass over shuffled minibatches; returns the mean loss of the batches
// that actually stepped (zero-event batches are skipped).
double run_epoch(RiskModel& model, AdamState& adam, const TrainDataset& train,
                 const TrainConfig& cfg, double lr, Rng& rng) {
  const int n = static_cast<int>(train.outcomes.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  const int batch_size = cfg.full_batch ? n : cfg.batch_size;
  double loss_sum = 0.0;
  int stepped = 0;
  for (int start = 0; start < n; start += batch_size) {
    const int end = std::min(n, start + batch_size);
    std::vector<int> rows(order.begin() + start, order.begin() + end);
    TrainDataset batch;
    batch.x = slice_inputs(model, train.x, rows);
    batch.outcomes = train.outcomes.subset(rows);
    auto loss = train_step(model, adam, batch, cfg, lr, rng);
    if (loss) {
      loss_sum += *loss;
      ++stepped;
    }
  }
  return stepped > 0 ? loss_sum / stepped : 0.0;
}

void check_train_set(const TrainDataset& train) {
  train.outcomes.validate();
  require(train.outcomes.n_events() >= 2, ErrKind::degenerate,
          "degenerate train set: needs at least 2 events");
}

}  // namespace

TrainResult train_with_early_stopping(RiskModel model, const TrainDataset& train,
                                      const TrainDataset& val, const TrainConfig& cfg) {
  cfg.validate();
  check_train_set(train);
  val.outcomes.validate();
  require(has_comparable_pair(val.outcomes), ErrKind::degenerate,
          "degenerate validation set: no comparable pair");

  Rng rng(cfg.seed);
  AdamState adam = make_adam_state(model);

  TrainResult result;
  result.model = model;
  result.best_val_cindex = -std::numeric_limits<double>::infinity();
  int epochs_without_improvement = 0;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const double lr = lr_schedule(epoch, cfg);
    const double train_loss = run_epoch(model, adam, train, cfg, lr, rng);
    const double val_c = c_index(val.outcomes, model_predict(model, val.x));
    result.history.push_back({train_loss, val_c, lr});

    if (val_c > result.best_val_cindex + kImprovementEps) {
      result.best_val_cindex = val_c;
      result.best_epoch = epoch + 1;  // 1-based
      result.model = model;
      epochs_without_improvement = 0;
    } else {
      ++epochs_without_improvement;
      if (epochs_without_improvement >= cfg.patience) break;
    }
  }
  return result;
}

RiskModel train_for_epochs(RiskModel model, const TrainDataset& train, const TrainConfig& cfg,
                           int epochs) {
  cfg.validate();
  check_train_set(train);
  require(epochs >= 1 && epochs <= cfg.max_epochs, ErrKind::invalid,
          "train_for_epochs: epochs must be in [1, max_epochs]");
  Rng rng(cfg.seed);
  AdamState adam = make_adam_state(model);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    run_epoch(model, adam, train, cfg, lr_schedule(epoch, cfg), rng);
  }
  return model;
}

}  // namespace survkit
