#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "survkit/femb.hpp"
#include "survkit/survival_data.hpp"

namespace survkit {

struct SurvivalOutcome {
  double time_months = 0.0;
  std::uint8_t event = 0;
};

enum class TStage { T1a, T1b, T2, T3, T4 };
enum class NStage { N0, Nx, N1plus };

struct LeibovichFeatures {
  TStage t_stage = TStage::T1a;
  NStage n_stage = NStage::N0;
  double tumor_size_cm = 0.0;
  int grade = 1;  // nuclear grade 1..4
};

struct PatientRecord {
  std::string patient_id;
  SurvivalOutcome outcome;
  std::map<std::string, std::int64_t> embeddings;  // modality -> row in its matrix
  std::optional<LeibovichFeatures> leibovich;
};

struct Cohort {
  std::vector<PatientRecord> patients;
  std::map<std::string, EmbeddingMatrix> matrices;

  std::size_t size() const { return patients.size(); }
  std::size_t n_events() const;
  bool has_modality(const std::string& modality) const;
  std::int64_t modality_dim(const std::string& modality) const;

  SurvivalData outcomes() const;
  SurvivalData outcomes_subset(const std::vector<int>& indices) const;

  // Rows of one modality for the given patients, as doubles. Requires every
  // selected patient to carry that modality.
  Eigen::MatrixXd design_matrix(const std::string& modality, const std::vector<int>& indices) const;

  void validate() const;
};

std::string t_stage_name(TStage t);
std::string n_stage_name(NStage n);
TStage parse_t_stage(const std::string& s);
NStage parse_n_stage(const std::string& s);

// Manifest CSV header, fixed order:
//   patient_id,time_months,event,wsi_file,wsi_row,ct_file,ct_row,
//   t_stage,n_stage,tumor_size_cm,grade
// Embedding cells may be empty (patient lacks that modality); the four
// Leibovich columns are either all present or all empty for a row.
// Embedding paths are resolved relative to the manifest's directory.
Cohort load_manifest(const std::string& manifest_path);

// Writes a cohort back out as manifest + one .femb per modality. Inverse of
// load_manifest for cohorts whose per-modality rows are in patient order.
void write_cohort(const Cohort& cohort, const std::string& dir,
                  const std::string& manifest_name = "manifest.csv");

}  // namespace survkit
