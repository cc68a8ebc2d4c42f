#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "survkit/cohort.hpp"

namespace survkit {

// Sparse signal coefficients for one modality: index -> beta value.
using SparseBeta = std::map<std::int64_t, double>;

struct SyntheticSpec {
  std::int64_t n_patients = 0;
  std::map<std::string, std::int64_t> dims;    // modality -> embedding dim
  std::map<std::string, SparseBeta> beta;      // modality -> signal coefficients
  // 1.0: modalities carry disjoint signal; 0.0: every signal coordinate is a
  // latent shared by all modalities, so either modality alone sees all of it.
  double complementary_split = 1.0;
  double weibull_shape = 1.0;
  double weibull_scale = 60.0;   // months
  double censoring_rate = 0.01;  // exponential rate, per month
  std::uint64_t seed = 0;

  void validate() const;
};

struct GroundTruth {
  std::map<std::string, SparseBeta> beta;
  std::vector<double> true_risk;  // r_i = sum_m beta_m . x_im, patient order
};

// Embeddings are standard-normal draws (float32 storage); the event time is
// Weibull with scale modulated by exp(-r/shape), which is exactly a
// proportional-hazards model with relative risk exp(r). Censoring is an
// independent exponential clock. Pure function of the spec, bit-identical
// across calls.
std::pair<Cohort, GroundTruth> generate_synthetic_cohort(const SyntheticSpec& spec);

// Files written: manifest.csv + <modality>.femb + ground_truth.json.
void write_synthetic_cohort(const SyntheticSpec& spec, const std::string& dir);

}  // namespace survkit
