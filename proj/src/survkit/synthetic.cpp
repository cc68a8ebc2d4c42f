#include "survkit/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "survkit/rng.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace survkit {

void SyntheticSpec::validate() const {
  require(n_patients >= 1, ErrKind::config, "synthetic spec: n_patients must be >= 1");
  require(!dims.empty(), ErrKind::config, "synthetic spec: at least one modality required");
  for (const auto& [modality, dim] : dims) {
    require(dim >= 1, ErrKind::config, "synthetic spec: dim for '" + modality + "' must be >= 1");
  }
  for (const auto& [modality, b] : beta) {
    auto it = dims.find(modality);
    require(it != dims.end(), ErrKind::config,
            "synthetic spec: beta given for unknown modality '" + modality + "'");
    for (const auto& [idx, v] : b) {
      require(idx >= 0 && idx < it->second, ErrKind::config,
              "synthetic spec: beta index out of range for '" + modality + "'");
      require(std::isfinite(v), ErrKind::config, "synthetic spec: non-finite beta");
    }
  }
  require(complementary_split >= 0.0 && complementary_split <= 1.0, ErrKind::config,
          "synthetic spec: complementary_split must be in [0,1]");
  require(weibull_shape > 0.0, ErrKind::config, "synthetic spec: weibull_shape must be > 0");
  require(weibull_scale > 0.0, ErrKind::config, "synthetic spec: weibull_scale must be > 0");
  require(censoring_rate > 0.0, ErrKind::config, "synthetic spec: censoring_rate must be > 0");
}

std::pair<Cohort, GroundTruth> generate_synthetic_cohort(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, 0x73796e7468ull));  // "synth"

  Cohort cohort;
  for (const auto& [modality, dim] : spec.dims) {
    EmbeddingMatrix m;
    m.modality = modality;
    m.n_patients = spec.n_patients;
    m.dim = dim;
    m.values.resize(static_cast<std::size_t>(spec.n_patients * dim));
    for (auto& v : m.values) v = static_cast<float>(rng.normal());
    cohort.matrices.emplace(modality, std::move(m));
  }

  // Shared signal: the first K signal coordinates of every modality are
  // overwritten with one common latent per patient, K set by the split.
  std::map<std::string, std::vector<std::int64_t>> signal_coords;
  std::size_t min_signal = std::numeric_limits<std::size_t>::max();
  for (const auto& [modality, dim] : spec.dims) {
    (void)dim;
    std::vector<std::int64_t> coords;
    auto it = spec.beta.find(modality);
    if (it != spec.beta.end()) {
      for (const auto& [idx, v] : it->second) {
        if (v != 0.0) coords.push_back(idx);
      }
    }
    min_signal = std::min(min_signal, coords.size());
    signal_coords.emplace(modality, std::move(coords));
  }
  const std::size_t n_shared =
      static_cast<std::size_t>(std::llround((1.0 - spec.complementary_split) *
                                            static_cast<double>(min_signal)));
  if (n_shared > 0) {
    for (std::int64_t i = 0; i < spec.n_patients; ++i) {
      for (std::size_t k = 0; k < n_shared; ++k) {
        const float latent = static_cast<float>(rng.normal());
        for (auto& [modality, coords] : signal_coords) {
          auto& m = cohort.matrices.at(modality);
          m.values[static_cast<std::size_t>(i * m.dim + coords[k])] = latent;
        }
      }
    }
  }

  GroundTruth truth;
  truth.beta = spec.beta;
  truth.true_risk.resize(static_cast<std::size_t>(spec.n_patients), 0.0);
  for (std::int64_t i = 0; i < spec.n_patients; ++i) {
    double r = 0.0;
    for (const auto& [modality, b] : spec.beta) {
      const auto& m = cohort.matrices.at(modality);
      // risk from the float32-stored values so a written+reloaded cohort
      // reproduces the same truths
      for (const auto& [idx, v] : b) r += v * static_cast<double>(m.at(i, idx));
    }
    truth.true_risk[static_cast<std::size_t>(i)] = r;
  }

  cohort.patients.resize(static_cast<std::size_t>(spec.n_patients));
  for (std::int64_t i = 0; i < spec.n_patients; ++i) {
    auto& p = cohort.patients[static_cast<std::size_t>(i)];
    char buf[32];
    std::snprintf(buf, sizeof(buf), "S%04lld", static_cast<long long>(i + 1));
    p.patient_id = buf;
    for (const auto& [modality, m] : cohort.matrices) {
      (void)m;
      p.embeddings[modality] = i;
    }
    // S(t|r) = exp(-(t/scale)^shape * e^r)  =>  t = scale*(-ln U)^(1/shape)*e^(-r/shape)
    const double r = truth.true_risk[static_cast<std::size_t>(i)];
    const double event_time =
        rng.weibull(spec.weibull_shape, spec.weibull_scale) * std::exp(-r / spec.weibull_shape);
    const double censor_time = rng.exponential(spec.censoring_rate);
    const bool event_first = event_time <= censor_time;
    p.outcome.event = event_first ? 1 : 0;
    // epsilon floor keeps the time strictly positive for extreme draws
    p.outcome.time_months = std::max(event_first ? event_time : censor_time, 1e-9);
  }

  cohort.validate();
  return {std::move(cohort), std::move(truth)};
}

void write_synthetic_cohort(const SyntheticSpec& spec, const std::string& dir) {
  auto [cohort, truth] = generate_synthetic_cohort(spec);
  write_cohort(cohort, dir);

  ordered_json j;
  j["schema"] = "survkit-ground-truth-v1";
  ordered_json beta;
  for (const auto& [modality, b] : truth.beta) {
    ordered_json entries = ordered_json::array();
    for (const auto& [idx, v] : b) {
      entries.push_back(ordered_json{{"index", idx}, {"value", v}});
    }
    beta[modality] = entries;
  }
  j["beta"] = beta;
  ordered_json risks = ordered_json::array();
  for (std::size_t i = 0; i < cohort.patients.size(); ++i) {
    risks.push_back(ordered_json{{"patient_id", cohort.patients[i].patient_id},
                                 {"true_risk", truth.true_risk[i]}});
  }
  j["true_risk"] = risks;

  const std::string path = (fs::path(dir) / "ground_truth.json").string();
  std::ofstream f(path, std::ios::trunc);
  require(f.good(), ErrKind::io, "cannot open for writing: " + path);
  f << j.dump(2) << "\n";
  require(f.good(), ErrKind::io, "write failed: " + path);
}

}  // namespace survkit
