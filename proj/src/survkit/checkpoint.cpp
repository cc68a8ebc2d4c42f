#include "survkit/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "survkit/bytes.hpp"

namespace survkit {

namespace {

constexpr char kMagic[4] = {'C', 'X', 'M', 'P'};
constexpr std::uint16_t kVersion = 1;

}  // namespace

void save_model(const RiskModel& model, const std::string& path) {
  std::string buf;
  buf.append(kMagic, 4);
  put_u16(buf, kVersion);
  buf.push_back(model.kind == ModelKind::intermediate ? 1 : 0);
  if (model.kind == ModelKind::unimodal) {
    require(model.modality.size() <= 255, ErrKind::invalid, "modality name too long");
    buf.push_back(static_cast<char>(model.modality.size()));
    buf.append(model.modality);
  } else {
    require(model.projection.has_value(), ErrKind::internal,
            "intermediate model without projection");
    put_u32(buf, static_cast<std::uint32_t>(model.projection->w.rows()));
    put_u32(buf, static_cast<std::uint32_t>(model.projection->w.cols()));
  }
  put_u32(buf, static_cast<std::uint32_t>(model.config.input_dim));
  put_u32(buf, static_cast<std::uint32_t>(model.config.hidden_dim));
  put_f64(buf, model.config.dropout);
  put_u64(buf, model.config.seed);
  for (const auto& block : param_blocks(const_cast<RiskModel&>(model))) {
    for (Eigen::Index i = 0; i < block.size; ++i) put_f64(buf, block.data[i]);
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  require(f.good(), ErrKind::io, "cannot open for writing: " + path);
  f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  require(f.good(), ErrKind::io, "write failed: " + path);
}

RiskModel load_model(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), ErrKind::io, "missing file: " + path);
  ByteReader r(f, path);

  char magic[4];
  r.read_raw(magic, 4);
  require(std::memcmp(magic, kMagic, 4) == 0, ErrKind::io,
          "bad magic bytes (not a checkpoint): " + path);
  require(r.u16() == kVersion, ErrKind::io, "unsupported checkpoint version: " + path);

  RiskModel model;
  const std::uint8_t kind = static_cast<std::uint8_t>(r.bytes(1)[0]);
  require(kind <= 1, ErrKind::io, "unknown model kind in " + path);
  model.kind = kind == 1 ? ModelKind::intermediate : ModelKind::unimodal;

  int wsi_dim = 0;
  int ct_dim = 0;
  if (model.kind == ModelKind::unimodal) {
    const std::size_t name_len = static_cast<std::uint8_t>(r.bytes(1)[0]);
    model.modality = r.bytes(name_len);
  } else {
    wsi_dim = static_cast<int>(r.u32());
    ct_dim = static_cast<int>(r.u32());
  }

  model.config.input_dim = static_cast<int>(r.u32());
  model.config.hidden_dim = static_cast<int>(r.u32());
  model.config.dropout = r.f64();
  model.config.seed = r.u64();
  model.config.validate();

  if (model.kind == ModelKind::intermediate) {
    require(model.config.input_dim == 2 * wsi_dim, ErrKind::io,
            "inconsistent intermediate checkpoint dims: " + path);
    CtProjection proj;
    proj.w.resize(wsi_dim, ct_dim);
    proj.b.resize(wsi_dim);
    model.projection = std::move(proj);
  }
  auto& p = model.params;
  p.w1.resize(model.config.hidden_dim, model.config.input_dim);
  p.b1.resize(model.config.hidden_dim);
  p.ln_gain.resize(model.config.hidden_dim);
  p.ln_bias.resize(model.config.hidden_dim);
  p.w2.resize(model.config.hidden_dim);

  for (auto& block : param_blocks(model)) {
    for (Eigen::Index i = 0; i < block.size; ++i) block.data[i] = r.f64();
  }
  r.expect_end();
  return model;
}

}  // namespace survkit
