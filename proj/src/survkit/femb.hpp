#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "survkit/error.hpp"

namespace survkit {

// N x D patient-level embedding block for one modality, float32 row-major.
struct EmbeddingMatrix {
  std::string modality;
  std::int64_t n_patients = 0;
  std::int64_t dim = 0;
  std::vector<float> values;  // row-major, n_patients * dim

  float at(std::int64_t row, std::int64_t col) const {
    return values[static_cast<std::size_t>(row * dim + col)];
  }

  void validate() const;
};

// ".femb": magic 'FEMB', u16 LE version (=1), u32 LE n_rows, u32 LE dim,
// then n_rows*dim float32 LE row-major. No padding; round-trips bit-exactly.
void write_embeddings(const EmbeddingMatrix& m, const std::string& path);
EmbeddingMatrix read_embeddings(const std::string& path);

}  // namespace survkit
