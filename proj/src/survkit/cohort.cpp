#include "survkit/cohort.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace fs = std::filesystem;

namespace survkit {

std::size_t Cohort::n_events() const {
  std::size_t n = 0;
  for (const auto& p : patients) n += p.outcome.event;
  return n;
}

bool Cohort::has_modality(const std::string& modality) const {
  return matrices.count(modality) > 0;
}

std::int64_t Cohort::modality_dim(const std::string& modality) const {
  auto it = matrices.find(modality);
  require(it != matrices.end(), ErrKind::invalid, "cohort has no modality '" + modality + "'");
  return it->second.dim;
}

SurvivalData Cohort::outcomes() const {
  SurvivalData d;
  d.time.reserve(patients.size());
  d.event.reserve(patients.size());
  for (const auto& p : patients) {
    d.time.push_back(p.outcome.time_months);
    d.event.push_back(p.outcome.event);
  }
  return d;
}

SurvivalData Cohort::outcomes_subset(const std::vector<int>& indices) const {
  return outcomes().subset(indices);
}

Eigen::MatrixXd Cohort::design_matrix(const std::string& modality,
                                      const std::vector<int>& indices) const {
  auto it = matrices.find(modality);
  require(it != matrices.end(), ErrKind::invalid, "cohort has no modality '" + modality + "'");
  const EmbeddingMatrix& m = it->second;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(indices.size()), m.dim);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const auto& p = patients[static_cast<std::size_t>(indices[r])];
    auto e = p.embeddings.find(modality);
    require(e != p.embeddings.end(), ErrKind::invalid,
            "patient " + p.patient_id + " has no '" + modality + "' embedding");
    for (std::int64_t c = 0; c < m.dim; ++c) {
      x(static_cast<Eigen::Index>(r), c) = static_cast<double>(m.at(e->second, c));
    }
  }
  return x;
}

void Cohort::validate() const {
  std::unordered_set<std::string> ids;
  for (const auto& p : patients) {
    require(!p.patient_id.empty(), ErrKind::invalid, "empty patient_id");
    require(ids.insert(p.patient_id).second, ErrKind::invalid,
            "duplicate patient_id " + p.patient_id);
    require(std::isfinite(p.outcome.time_months) && p.outcome.time_months > 0.0,
            ErrKind::invalid, "patient " + p.patient_id + ": time_months must be positive");
    for (const auto& [modality, row] : p.embeddings) {
      auto it = matrices.find(modality);
      require(it != matrices.end(), ErrKind::invalid,
              "patient " + p.patient_id + " references unknown modality '" + modality + "'");
      require(row >= 0 && row < it->second.n_patients, ErrKind::invalid,
              "patient " + p.patient_id + ": row out of bounds for modality '" + modality + "'");
    }
  }
  for (const auto& [name, m] : matrices) {
    (void)name;
    m.validate();
  }
}

std::string t_stage_name(TStage t) {
  switch (t) {
    case TStage::T1a: return "T1a";
    case TStage::T1b: return "T1b";
    case TStage::T2: return "T2";
    case TStage::T3: return "T3";
    case TStage::T4: return "T4";
  }
  return "?";
}

std::string n_stage_name(NStage n) {
  switch (n) {
    case NStage::N0: return "N0";
    case NStage::Nx: return "Nx";
    case NStage::N1plus: return "N1plus";
  }
  return "?";
}

TStage parse_t_stage(const std::string& s) {
  if (s == "T1a") return TStage::T1a;
  if (s == "T1b") return TStage::T1b;
  if (s == "T2") return TStage::T2;
  if (s == "T3") return TStage::T3;
  if (s == "T4") return TStage::T4;
  fail(ErrKind::invalid, "unknown t_stage '" + s + "'");
}

NStage parse_n_stage(const std::string& s) {
  if (s == "N0") return NStage::N0;
  if (s == "Nx") return NStage::Nx;
  if (s == "N1plus") return NStage::N1plus;
  fail(ErrKind::invalid, "unknown n_stage '" + s + "'");
}

namespace {

constexpr const char* kManifestHeader =
    "patient_id,time_months,event,wsi_file,wsi_row,ct_file,ct_row,"
    "t_stage,n_stage,tumor_size_cm,grade";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

[[noreturn]] void malformed(int line_no, const std::string& what) {
  fail(ErrKind::invalid, "malformed manifest row (line " + std::to_string(line_no) + "): " + what);
}

double parse_double_field(const std::string& s, int line_no, const std::string& name) {
  double v = 0.0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) malformed(line_no, "bad " + name + " '" + s + "'");
  return v;
}

std::int64_t parse_int_field(const std::string& s, int line_no, const std::string& name) {
  std::int64_t v = 0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) malformed(line_no, "bad " + name + " '" + s + "'");
  return v;
}

struct EmbeddingRef {
  std::string file;
  std::int64_t row = 0;
};

}  // namespace

Cohort load_manifest(const std::string& manifest_path) {
  std::ifstream f(manifest_path);
  require(f.good(), ErrKind::io, "missing file: " + manifest_path);
  const fs::path base_dir = fs::path(manifest_path).parent_path();

  std::string line;
  require(static_cast<bool>(std::getline(f, line)), ErrKind::invalid,
          "malformed manifest: empty file " + manifest_path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == kManifestHeader, ErrKind::invalid,
          "malformed manifest: unexpected header in " + manifest_path);

  Cohort cohort;
  std::unordered_set<std::string> seen_ids;
  // modality -> per-patient (file,row) references, manifest order
  std::map<std::string, std::vector<std::pair<std::size_t, EmbeddingRef>>> refs;

  int line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 11) malformed(line_no, "expected 11 fields, got " + std::to_string(fields.size()));

    PatientRecord p;
    p.patient_id = fields[0];
    if (p.patient_id.empty()) malformed(line_no, "empty patient_id");
    require(seen_ids.insert(p.patient_id).second, ErrKind::invalid,
            "duplicate patient_id " + p.patient_id);

    p.outcome.time_months = parse_double_field(fields[1], line_no, "time_months");
    if (!std::isfinite(p.outcome.time_months) || p.outcome.time_months <= 0.0) {
      malformed(line_no, "time_months must be positive");
    }
    if (fields[2] != "0" && fields[2] != "1") malformed(line_no, "event must be 0 or 1");
    p.outcome.event = static_cast<std::uint8_t>(fields[2] == "1");

    auto take_ref = [&](const std::string& file_field, const std::string& row_field,
                        const char* modality) {
      if (file_field.empty() && row_field.empty()) return;
      if (file_field.empty() || row_field.empty()) {
        malformed(line_no, std::string(modality) + "_file and " + modality + "_row must be given together");
      }
      EmbeddingRef ref;
      ref.file = file_field;
      ref.row = parse_int_field(row_field, line_no, std::string(modality) + "_row");
      if (ref.row < 0) malformed(line_no, std::string(modality) + "_row must be >= 0");
      refs[modality].emplace_back(cohort.patients.size(), ref);
    };
    take_ref(fields[3], fields[4], "wsi");
    take_ref(fields[5], fields[6], "ct");

    const bool any_leibovich = !fields[7].empty() || !fields[8].empty() ||
                               !fields[9].empty() || !fields[10].empty();
    const bool all_leibovich = !fields[7].empty() && !fields[8].empty() &&
                               !fields[9].empty() && !fields[10].empty();
    if (any_leibovich && all_leibovich) {
      LeibovichFeatures lf;
      try {
        lf.t_stage = parse_t_stage(fields[7]);
        lf.n_stage = parse_n_stage(fields[8]);
      } catch (const Error& e) {
        malformed(line_no, e.what());
      }
      lf.tumor_size_cm = parse_double_field(fields[9], line_no, "tumor_size_cm");
      if (!(lf.tumor_size_cm > 0.0) || !std::isfinite(lf.tumor_size_cm)) {
        malformed(line_no, "tumor_size_cm must be positive");
      }
      const std::int64_t g = parse_int_field(fields[10], line_no, "grade");
      if (g < 1 || g > 4) malformed(line_no, "grade must be in 1..4");
      lf.grade = static_cast<int>(g);
      p.leibovich = lf;
    }
    // partially filled clinical columns: treated as missing features, the
    // patient is still usable for imaging strategies

    cohort.patients.push_back(std::move(p));
  }
  require(!cohort.patients.empty(), ErrKind::invalid, "malformed manifest: empty cohort");

  // Consolidate each modality into one matrix, rows in patient order.
  for (auto& [modality, patient_refs] : refs) {
    std::unordered_map<std::string, EmbeddingMatrix> loaded;
    EmbeddingMatrix out;
    out.modality = modality;
    for (const auto& [patient_idx, ref] : patient_refs) {
      const std::string full_path = (base_dir / ref.file).string();
      auto it = loaded.find(full_path);
      if (it == loaded.end()) {
        it = loaded.emplace(full_path, read_embeddings(full_path)).first;
      }
      const EmbeddingMatrix& src = it->second;
      if (out.dim == 0) {
        out.dim = src.dim;
      } else {
        require(out.dim == src.dim, ErrKind::dim_mismatch,
                "dimension mismatch for modality '" + modality + "': " + ref.file + " has dim " +
                    std::to_string(src.dim) + ", expected " + std::to_string(out.dim));
      }
      require(ref.row < src.n_patients, ErrKind::invalid,
              "row " + std::to_string(ref.row) + " out of bounds in " + ref.file);
      for (std::int64_t c = 0; c < src.dim; ++c) out.values.push_back(src.at(ref.row, c));
      cohort.patients[patient_idx].embeddings[modality] = out.n_patients;
      ++out.n_patients;
    }
    cohort.matrices.emplace(modality, std::move(out));
  }

  cohort.validate();
  return cohort;
}

void write_cohort(const Cohort& cohort, const std::string& dir, const std::string& manifest_name) {
  cohort.validate();
  fs::create_directories(dir);
  for (const auto& [modality, m] : cohort.matrices) {
    write_embeddings(m, (fs::path(dir) / (modality + ".femb")).string());
  }

  std::ostringstream out;
  out << kManifestHeader << "\n";
  for (const auto& p : cohort.patients) {
    out << p.patient_id << ',';
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", p.outcome.time_months);
    out << buf << ',' << static_cast<int>(p.outcome.event) << ',';
    auto emit_ref = [&](const char* modality) {
      auto it = p.embeddings.find(modality);
      if (it != p.embeddings.end()) {
        out << modality << ".femb," << it->second << ',';
      } else {
        out << ",,";
      }
    };
    emit_ref("wsi");
    emit_ref("ct");
    if (p.leibovich) {
      std::snprintf(buf, sizeof(buf), "%.17g", p.leibovich->tumor_size_cm);
      out << t_stage_name(p.leibovich->t_stage) << ',' << n_stage_name(p.leibovich->n_stage) << ','
          << buf << ',' << p.leibovich->grade;
    } else {
      out << ",,,";
    }
    out << "\n";
  }

  const std::string path = (fs::path(dir) / manifest_name).string();
  std::ofstream f(path, std::ios::trunc);
  require(f.good(), ErrKind::io, "cannot open for writing: " + path);
  f << out.str();
  require(f.good(), ErrKind::io, "write failed: " + path);
}

}  // namespace survkit
