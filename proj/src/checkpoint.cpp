#include "gsparse/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>

#include "gsparse/error.hpp"

namespace gsparse {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'S', 'G', 'S', 'G'};

using TensorMap = std::map<std::string, Matrix>;

Matrix scalar_tensor(double v) { return Matrix::Constant(1, 1, v); }

Matrix row_tensor(const std::vector<double>& v) {
  Matrix m(1, static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m(0, static_cast<Eigen::Index>(i)) = v[i];
  return m;
}

void put_params(TensorMap& t, const std::string& prefix, ModelParams p) {
  for (const ParamRef& r : p.encoder.refs()) t[prefix + r.name] = *r.value;
  for (const ParamRef& r : p.gnn.refs()) t[prefix + r.name] = *r.value;
}

void put_adam(TensorMap& t, const std::string& prefix, const AdamState& a) {
  t[prefix + "lr"] = scalar_tensor(a.lr);
  t[prefix + "beta1"] = scalar_tensor(a.beta1);
  t[prefix + "beta2"] = scalar_tensor(a.beta2);
  t[prefix + "eps"] = scalar_tensor(a.eps);
  t[prefix + "step"] = scalar_tensor(static_cast<double>(a.step));
  for (std::size_t i = 0; i < a.m.size(); ++i) {
    t[prefix + "m." + std::to_string(i)] = a.m[i];
    t[prefix + "v." + std::to_string(i)] = a.v[i];
  }
}

const Matrix& take(const TensorMap& t, const std::string& name) {
  auto it = t.find(name);
  if (it == t.end()) throw Error("checkpoint is missing tensor '" + name + "'");
  return it->second;
}

double take_scalar(const TensorMap& t, const std::string& name) {
  const Matrix& m = take(t, name);
  if (m.size() != 1) throw Error("checkpoint tensor '" + name + "' is not a scalar");
  return m(0, 0);
}

ModelParams get_params(const TensorMap& t, const std::string& prefix) {
  ModelParams p;
  for (const ParamRef& r : p.encoder.refs()) *r.value = take(t, prefix + r.name);
  for (int l = 0; t.count(prefix + "gnn.w" + std::to_string(l)); ++l) {
    p.gnn.weights.push_back(take(t, prefix + "gnn.w" + std::to_string(l)));
  }
  for (int l = 0; t.count(prefix + "gnn.b" + std::to_string(l)); ++l) {
    p.gnn.biases.push_back(take(t, prefix + "gnn.b" + std::to_string(l)));
  }
  if (p.gnn.weights.empty()) throw Error("checkpoint has no GCN weights");
  return p;
}

AdamState get_adam(const TensorMap& t, const std::string& prefix) {
  AdamState a;
  a.lr = take_scalar(t, prefix + "lr");
  a.beta1 = take_scalar(t, prefix + "beta1");
  a.beta2 = take_scalar(t, prefix + "beta2");
  a.eps = take_scalar(t, prefix + "eps");
  a.step = static_cast<long>(take_scalar(t, prefix + "step"));
  for (int i = 0; t.count(prefix + "m." + std::to_string(i)); ++i) {
    a.m.push_back(take(t, prefix + "m." + std::to_string(i)));
    a.v.push_back(take(t, prefix + "v." + std::to_string(i)));
  }
  return a;
}

template <typename T>
void write_pod(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_pod(std::istream& is, const std::filesystem::path& file) {
  T v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error(file.string() + ": truncated checkpoint");
  return v;
}

} // namespace

void save_checkpoint(const ModelState& s, const std::filesystem::path& file) {
  TensorMap t;
  put_params(t, "current.", s.current);
  put_params(t, "best.", s.best);
  put_adam(t, "adam.encoder.", s.adam_encoder);
  put_adam(t, "adam.gnn.", s.adam_gnn);
  t["state.num_nodes"] = scalar_tensor(static_cast<double>(s.num_nodes));
  t["state.epoch"] = scalar_tensor(s.epoch);
  t["state.best_epoch"] = scalar_tensor(s.best_epoch);
  t["state.best_t"] = scalar_tensor(s.best_t);
  t["state.best_val_f1"] = scalar_tensor(s.best_val_f1);
  t["state.best_val_loss"] = scalar_tensor(s.best_val_loss);
  t["state.epochs_since_improvement"] = scalar_tensor(s.epochs_since_improvement);
  t["state.converged_epoch"] = scalar_tensor(s.converged_epoch);
  t["state.loss_history"] = row_tensor(s.loss_history);

  std::ofstream os(file, std::ios::binary);
  if (!os) throw Error("cannot write " + file.string());
  os.write(kMagic, 4);
  write_pod<std::uint32_t>(os, kCheckpointVersion);
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(t.size()));
  for (const auto& [name, m] : t) {
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(m.rows()));
    write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(m.cols()));
    os.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
  }
  if (!os) throw Error("failed writing " + file.string());
}

ModelState load_checkpoint(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw Error("cannot open checkpoint " + file.string());
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw Error(file.string() + ": not a checkpoint");
  const auto version = read_pod<std::uint32_t>(is, file);
  if (version != kCheckpointVersion) {
    throw Error(file.string() + ": unsupported checkpoint version " + std::to_string(version));
  }
  const auto count = read_pod<std::uint32_t>(is, file);
  TensorMap t;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto len = read_pod<std::uint32_t>(is, file);
    if (len > 4096) throw Error(file.string() + ": corrupt tensor name");
    std::string name(len, '\0');
    if (!is.read(name.data(), len)) throw Error(file.string() + ": truncated checkpoint");
    const auto rows = read_pod<std::uint64_t>(is, file);
    const auto cols = read_pod<std::uint64_t>(is, file);
    if (rows > (1u << 28) || cols > (1u << 28) || rows * cols > (1ull << 32)) {
      throw Error(file.string() + ": corrupt tensor shape for '" + name + "'");
    }
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    if (!is.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)))) {
      throw Error(file.string() + ": truncated checkpoint");
    }
    t[name] = std::move(m);
  }

  ModelState s;
  s.current = get_params(t, "current.");
  s.best = get_params(t, "best.");
  s.adam_encoder = get_adam(t, "adam.encoder.");
  s.adam_gnn = get_adam(t, "adam.gnn.");
  s.num_nodes = static_cast<std::size_t>(take_scalar(t, "state.num_nodes"));
  s.epoch = static_cast<int>(take_scalar(t, "state.epoch"));
  s.best_epoch = static_cast<int>(take_scalar(t, "state.best_epoch"));
  s.best_t = take_scalar(t, "state.best_t");
  s.best_val_f1 = take_scalar(t, "state.best_val_f1");
  s.best_val_loss = take_scalar(t, "state.best_val_loss");
  s.epochs_since_improvement = static_cast<int>(take_scalar(t, "state.epochs_since_improvement"));
  s.converged_epoch = static_cast<int>(take_scalar(t, "state.converged_epoch"));
  const Matrix& h = take(t, "state.loss_history");
  s.loss_history.assign(h.data(), h.data() + h.size());
  return s;
}

} // namespace gsparse
