#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "windscen/pipeline.hpp"

// Bundle container layout (all integers little-endian):
//   magic "WSCNBNDL" | u32 version | u64 meta_len | meta JSON (UTF-8)
//   | arrays... | u64 FNV-1a checksum of everything before it.
// Each array is u64 count followed by count IEEE-754 doubles. Array order:
// per-model h_floor [dim], then per model (alpha, beta, ecdf values),
// then sigma_n, chol and u_hat row-major.

namespace windscen {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'W', 'S', 'C', 'N', 'B', 'N', 'D', 'L'};

class ChecksumWriter {
 public:
  explicit ChecksumWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path);
  }
  void bytes(const void* p, std::size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= b[i];
      hash_ *= 1099511628211ull;
    }
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  }
  void u32(std::uint32_t v) { bytes(&v, 4); }
  void u64(std::uint64_t v) { bytes(&v, 8); }
  void doubles(const double* p, std::size_t n) {
    u64(n);
    bytes(p, n * sizeof(double));
  }
  void finish() {
    std::uint64_t h = hash_;
    out_.write(reinterpret_cast<const char*>(&h), 8);
    out_.close();
    if (!out_) throw std::runtime_error("bundle write failed");
  }

 private:
  std::ofstream out_;
  std::uint64_t hash_ = 14695981039346656037ull;
};

class Reader {
 public:
  explicit Reader(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw std::runtime_error("cannot open bundle: " + path);
    auto size = in.tellg();
    if (size < 28) throw std::runtime_error("bundle truncated: " + path);
    buf_.resize(static_cast<std::size_t>(size));
    in.seekg(0);
    in.read(buf_.data(), size);
    if (!in) throw std::runtime_error("bundle read failed: " + path);

    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i + 8 < buf_.size(); ++i) {
      h ^= static_cast<unsigned char>(buf_[i]);
      h *= 1099511628211ull;
    }
    std::uint64_t stored;
    std::memcpy(&stored, buf_.data() + buf_.size() - 8, 8);
    if (h != stored) throw std::runtime_error("bundle checksum mismatch: " + path);
    end_ = buf_.size() - 8;
  }

  void bytes(void* p, std::size_t n) {
    if (pos_ + n > end_) throw std::runtime_error("bundle truncated payload");
    std::memcpy(p, buf_.data() + pos_, n);
    pos_ += n;
  }
  std::uint32_t u32() { std::uint32_t v; bytes(&v, 4); return v; }
  std::uint64_t u64() { std::uint64_t v; bytes(&v, 8); return v; }
  std::vector<double> doubles() {
    std::uint64_t n = u64();
    if (pos_ + n * sizeof(double) > end_) throw std::runtime_error("bundle truncated payload");
    std::vector<double> v(n);
    bytes(v.data(), n * sizeof(double));
    return v;
  }
  std::string str(std::size_t n) {
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }

 private:
  std::vector<char> buf_;
  std::size_t pos_ = 0, end_ = 0;
};

void write_matrix_rowmajor(ChecksumWriter& w, const Eigen::MatrixXd& m) {
  std::vector<double> row(m.cols());
  w.u64(static_cast<std::uint64_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[j] = m(i, j);
    w.bytes(row.data(), row.size() * sizeof(double));
  }
}

Eigen::MatrixXd read_matrix_rowmajor(Reader& r, Eigen::Index rows, Eigen::Index cols) {
  std::vector<double> flat = r.doubles();
  if (static_cast<Eigen::Index>(flat.size()) != rows * cols) {
    throw std::runtime_error("bundle: matrix size mismatch");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = flat[i * cols + j];
  }
  return m;
}

}  // namespace

void save_bundle(const TrainedBundle& bundle, const std::string& path) {
  const int dim = bundle.dim();
  json meta;
  meta["n_farms"] = bundle.registry.n_farms();
  meta["n_tau"] = bundle.horizon.n_tau;
  meta["step_sec"] = bundle.horizon.step_sec;
  meta["s_max"] = bundle.s_max();
  meta["fallback_spread_frac"] = bundle.fallback_spread_frac;
  json reg = json::array();
  for (const auto& f : bundle.registry.farms()) {
    reg.push_back({{"id", f.id}, {"capacity_mw", f.capacity_mw}, {"neighbors", f.neighbors}});
  }
  meta["registry"] = reg;
  meta["features"] = {{"nwp_trailing_lags", bundle.features.nwp_trailing_lags},
                      {"power_lags", bundle.features.power_lags},
                      {"error_lag_multiples", bundle.features.error_lag_multiples},
                      {"neighbor_count", bundle.features.neighbor_count},
                      {"nwp_lead_degree", bundle.features.nwp_lead_degree}};
  json flags = json::array();
  std::vector<int> ridge(dim), fallback(dim);
  for (int k = 0; k < dim; ++k) {
    flags.push_back(bundle.meta.model_flags[k]);
    ridge[k] = bundle.models[k].ridge_flagged ? 1 : 0;
    fallback[k] = bundle.models[k].climatology_fallback ? 1 : 0;
  }
  meta["model_flags"] = flags;
  meta["ridge_flagged"] = ridge;
  meta["climatology_fallback"] = fallback;
  meta["training"] = {{"reg_start", bundle.meta.reg_start},
                      {"reg_end", bundle.meta.reg_end},
                      {"dist_start", bundle.meta.dist_start},
                      {"dist_end", bundle.meta.dist_end},
                      {"total_dropped_rows", bundle.meta.total_dropped_rows},
                      {"seed", bundle.meta.seed},
                      {"config_hash", bundle.meta.config_hash}};
  meta["copula"] = {{"sample_rows", bundle.copula.sample_rows},
                    {"low_sample", bundle.copula.low_sample},
                    {"degenerate_columns", bundle.copula.degenerate_columns}};
  const std::string meta_str = meta.dump();

  ChecksumWriter w(path);
  w.bytes(kMagic, 8);
  w.u32(kBundleFormatVersion);
  w.u64(meta_str.size());
  w.bytes(meta_str.data(), meta_str.size());

  std::vector<double> h_floors(dim);
  for (int k = 0; k < dim; ++k) h_floors[k] = bundle.models[k].h_floor;
  w.doubles(h_floors.data(), h_floors.size());
  for (int k = 0; k < dim; ++k) {
    const HeteroModel& m = bundle.models[k];
    w.doubles(m.alpha.data(), m.alpha.size());
    w.doubles(m.beta.data(), m.beta.size());
    w.doubles(m.ecdf.sorted_u().data(), m.ecdf.sorted_u().size());
  }
  write_matrix_rowmajor(w, bundle.copula.sigma_n);
  write_matrix_rowmajor(w, bundle.copula.chol);
  write_matrix_rowmajor(w, bundle.u_hat);
  w.finish();
}

TrainedBundle load_bundle(const std::string& path) {
  Reader r(path);
  char magic[8];
  r.bytes(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0) {
    throw std::runtime_error("not a bundle file: " + path);
  }
  std::uint32_t version = r.u32();
  if (version != kBundleFormatVersion) {
    throw std::runtime_error("bundle format version " + std::to_string(version) +
                             " unsupported (expected " +
                             std::to_string(kBundleFormatVersion) + ")");
  }
  std::uint64_t meta_len = r.u64();
  json meta = json::parse(r.str(meta_len));

  TrainedBundle b;
  b.horizon.n_tau = meta.at("n_tau").get<int>();
  b.horizon.step_sec = meta.at("step_sec").get<std::int64_t>();
  b.fallback_spread_frac = meta.at("fallback_spread_frac").get<double>();
  std::vector<Farm> farms;
  for (const auto& f : meta.at("registry")) {
    farms.push_back(Farm{f.at("id").get<std::string>(),
                         f.at("capacity_mw").get<double>(),
                         f.at("neighbors").get<std::vector<std::string>>()});
  }
  b.registry = FarmRegistry(std::move(farms));
  const json& fs = meta.at("features");
  b.features.nwp_trailing_lags = fs.at("nwp_trailing_lags").get<int>();
  b.features.power_lags = fs.at("power_lags").get<int>();
  b.features.error_lag_multiples = fs.at("error_lag_multiples").get<std::vector<int>>();
  b.features.neighbor_count = fs.at("neighbor_count").get<int>();
  b.features.nwp_lead_degree = fs.at("nwp_lead_degree").get<int>();

  const int dim = b.dim();
  b.meta.model_flags = meta.at("model_flags").get<std::vector<std::string>>();
  std::vector<int> ridge = meta.at("ridge_flagged").get<std::vector<int>>();
  std::vector<int> fallback = meta.at("climatology_fallback").get<std::vector<int>>();
  const json& tr = meta.at("training");
  b.meta.reg_start = tr.at("reg_start").get<TimePoint>();
  b.meta.reg_end = tr.at("reg_end").get<TimePoint>();
  b.meta.dist_start = tr.at("dist_start").get<TimePoint>();
  b.meta.dist_end = tr.at("dist_end").get<TimePoint>();
  b.meta.total_dropped_rows = tr.at("total_dropped_rows").get<long>();
  b.meta.seed = tr.at("seed").get<std::uint64_t>();
  b.meta.config_hash = tr.at("config_hash").get<std::uint64_t>();

  std::vector<double> h_floors = r.doubles();
  if (static_cast<int>(h_floors.size()) != dim ||
      static_cast<int>(b.meta.model_flags.size()) != dim) {
    throw std::runtime_error("bundle: model grid size mismatch");
  }
  b.models.resize(dim);
  for (int k = 0; k < dim; ++k) {
    HeteroModel& m = b.models[k];
    std::vector<double> a = r.doubles();
    std::vector<double> be = r.doubles();
    m.alpha = Eigen::Map<Eigen::VectorXd>(a.data(), a.size());
    m.beta = Eigen::Map<Eigen::VectorXd>(be.data(), be.size());
    m.ecdf = EcdfTable::from_sorted(r.doubles());
    m.h_floor = h_floors[k];
    m.ridge_flagged = ridge[k] != 0;
    m.climatology_fallback = fallback[k] != 0;
  }
  b.copula.dim = dim;
  b.copula.sample_rows = meta.at("copula").at("sample_rows").get<long>();
  b.copula.low_sample = meta.at("copula").at("low_sample").get<bool>();
  b.copula.degenerate_columns =
      meta.at("copula").at("degenerate_columns").get<std::vector<int>>();
  b.copula.sigma_n = read_matrix_rowmajor(r, dim, dim);
  b.copula.chol = read_matrix_rowmajor(r, dim, dim);
  const int s_max = meta.at("s_max").get<int>();
  b.u_hat = read_matrix_rowmajor(r, s_max, dim);
  return b;
}

}  // namespace windscen
