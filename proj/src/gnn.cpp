#include "mwis/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mwis {

std::string_view architecture_name(Architecture a) {
  switch (a) {
    case Architecture::Gcn: return "gcn";
    case Architecture::Sage: return "sage";
    case Architecture::Lr: return "lr";
  }
  return "?";
}

Architecture architecture_from_name(std::string_view name) {
  for (auto a : {Architecture::Gcn, Architecture::Sage, Architecture::Lr})
    if (architecture_name(a) == name) return a;
  throw ModelError("unknown architecture \"" + std::string(name) + "\"");
}

namespace {

std::size_t mp_factor(Architecture a) { return a == Architecture::Gcn ? 1 : 2; }

// Expected (in, cols) of each layer given the hidden widths already fixed.
void check_layer(const Layer& l, std::size_t index, std::size_t in, std::size_t cols, std::string_view arch) {
  const std::string where = std::string(arch) + " layer " + std::to_string(index);
  if (l.in != in) throw ModelError(where + ": input width " + std::to_string(l.in) + ", expected " + std::to_string(in));
  if (l.out == 0) throw ModelError(where + ": zero output width");
  if (l.weight.size() != l.out * cols)
    throw ModelError(where + ": weight has " + std::to_string(l.weight.size()) + " entries, expected " +
                     std::to_string(l.out) + "x" + std::to_string(cols));
  if (l.bias.size() != l.out) throw ModelError(where + ": bias length " + std::to_string(l.bias.size()));
  for (double x : l.weight)
    if (!std::isfinite(x)) throw ModelError(where + ": non-finite weight");
  for (double x : l.bias)
    if (!std::isfinite(x)) throw ModelError(where + ": non-finite bias");
}

double relu(double x) { return x > 0 ? x : 0; }
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// y = W x + b over a row-major matrix.
void affine(const Layer& l, const double* x, double* y) {
  const std::size_t cols = l.cols();
  for (std::size_t r = 0; r < l.out; ++r) {
    const double* w = l.weight.data() + r * cols;
    double s = l.bias[r];
    for (std::size_t c = 0; c < cols; ++c) s += w[c] * x[c];
    y[r] = s;
  }
}

using Matrix = std::vector<double>;  // n x width, row-major

Matrix message_passing(Architecture arch, const Layer& l, const StaticGraph& g, const Matrix& h) {
  const std::size_t n = g.num_vertices(), d = l.in, out = l.out;
  Matrix next(n * out, 0.0);
  std::vector<double> buf(2 * d), y(out);
  for (VertexId u = 0; u < n; ++u) {
    double* dst = next.data() + u * out;
    auto nb = g.neighbors(u);
    switch (arch) {
      case Architecture::Gcn: {
        // Self edge added; each message scaled by 1/sqrt(deg(v) + 1).
        std::fill(buf.begin(), buf.begin() + d, 0.0);
        auto add = [&](VertexId v) {
          const double s = 1.0 / std::sqrt(static_cast<double>(g.degree(v) + 1));
          for (std::size_t k = 0; k < d; ++k) buf[k] += h[v * d + k] * s;
        };
        add(u);
        for (VertexId v : nb) add(v);
        affine(l, buf.data(), y.data());
        for (std::size_t k = 0; k < out; ++k) dst[k] = relu(y[k]);
        break;
      }
      case Architecture::Sage: {
        std::copy_n(h.data() + u * d, d, buf.begin());
        std::fill(buf.begin() + d, buf.end(), 0.0);
        for (VertexId v : nb)
          for (std::size_t k = 0; k < d; ++k) buf[d + k] += h[v * d + k];
        if (!nb.empty())
          for (std::size_t k = 0; k < d; ++k) buf[d + k] /= static_cast<double>(nb.size());
        affine(l, buf.data(), y.data());
        for (std::size_t k = 0; k < out; ++k) dst[k] = relu(y[k]);
        break;
      }
      case Architecture::Lr: {
        if (nb.empty()) break;  // zero vector
        std::copy_n(h.data() + u * d, d, buf.begin());
        for (VertexId v : nb) {
          std::copy_n(h.data() + v * d, d, buf.begin() + d);
          affine(l, buf.data(), y.data());
          for (std::size_t k = 0; k < out; ++k) dst[k] += relu(y[k]);
        }
        for (std::size_t k = 0; k < out; ++k) dst[k] /= static_cast<double>(nb.size());
        break;
      }
    }
  }
  return next;
}

}  // namespace

void GnnModel::validate() const {
  const auto arch_name = architecture_name(arch);
  if (layers.size() != 4)
    throw ModelError(std::string(arch_name) + " model needs 4 layers (2 message passing + 2 dense), got " +
                     std::to_string(layers.size()));
  const std::size_t f = mp_factor(arch);
  check_layer(layers[0], 0, kNumFeatures, f * kNumFeatures, arch_name);
  check_layer(layers[1], 1, layers[0].out, f * layers[0].out, arch_name);
  const std::size_t concat = kNumFeatures + layers[0].out + layers[1].out;
  check_layer(layers[2], 2, concat, concat, arch_name);
  const std::size_t last_in = concat_final ? concat + layers[2].out : layers[2].out;
  check_layer(layers[3], 3, last_in, last_in, arch_name);
  if (layers[3].out != 1) throw ModelError(std::string(arch_name) + " layer 3: output width must be 1");
}

std::vector<float> extract_features(const StaticGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<float> f(n * kNumFeatures, 0.0f);
  for (VertexId v = 0; v < n; ++v) {
    float* row = f.data() + v * kNumFeatures;
    row[0] = static_cast<float>(g.weight(v));
    auto nb = g.neighbors(v);
    row[4] = static_cast<float>(nb.size());
    if (nb.empty()) continue;
    Weight sum = 0, lo = g.weight(nb[0]), hi = lo;
    std::size_t dsum = 0, dlo = g.degree(nb[0]), dhi = dlo;
    for (VertexId u : nb) {
      const Weight w = g.weight(u);
      sum += w;
      lo = std::min(lo, w);
      hi = std::max(hi, w);
      const std::size_t d = g.degree(u);
      dsum += d;
      dlo = std::min(dlo, d);
      dhi = std::max(dhi, d);
    }
    row[1] = static_cast<float>(sum);
    row[2] = static_cast<float>(lo);
    row[3] = static_cast<float>(hi);
    row[5] = static_cast<float>(static_cast<double>(dsum) / static_cast<double>(nb.size()));
    row[6] = static_cast<float>(dlo);
    row[7] = static_cast<float>(dhi);
  }
  return f;
}

std::vector<double> forward(const GnnModel& model, const StaticGraph& g, const std::vector<float>& features) {
  model.validate();
  const std::size_t n = g.num_vertices();
  if (features.size() != n * kNumFeatures)
    throw ModelError("feature matrix has " + std::to_string(features.size()) + " entries, expected " +
                     std::to_string(n * kNumFeatures));
  Matrix x(features.begin(), features.end());
  Matrix h1 = message_passing(model.arch, model.layers[0], g, x);
  Matrix h2 = message_passing(model.arch, model.layers[1], g, h1);

  const Layer& l3 = model.layers[2];
  const Layer& l4 = model.layers[3];
  const std::size_t d1 = model.layers[0].out, d2 = model.layers[1].out;
  std::vector<double> cat(l3.in + l3.out), y(std::max(l3.out, l4.out));
  std::vector<double> out(n);
  for (VertexId u = 0; u < n; ++u) {
    std::copy_n(x.data() + u * kNumFeatures, kNumFeatures, cat.begin());
    std::copy_n(h1.data() + u * d1, d1, cat.begin() + kNumFeatures);
    std::copy_n(h2.data() + u * d2, d2, cat.begin() + kNumFeatures + d1);
    double* h3 = cat.data() + l3.in;
    affine(l3, cat.data(), h3);
    for (std::size_t k = 0; k < l3.out; ++k) h3[k] = relu(h3[k]);
    affine(l4, model.concat_final ? cat.data() : h3, y.data());
    out[u] = sigmoid(y[0]);
  }
  return out;
}

std::vector<double> predict(const GnnModel& model, const StaticGraph& g) {
  return forward(model, g, extract_features(g));
}

namespace {
Layer zero_layer(std::size_t in, std::size_t out, std::size_t cols) {
  return Layer{in, out, std::vector<double>(out * cols, 0.0), std::vector<double>(out, 0.0)};
}
}  // namespace

GnnModel make_zero_model(Architecture arch, std::size_t hidden, bool concat_final) {
  GnnModel m;
  m.arch = arch;
  m.concat_final = concat_final;
  const std::size_t f = mp_factor(arch);
  const std::size_t concat = kNumFeatures + 2 * hidden;
  m.layers.push_back(zero_layer(kNumFeatures, hidden, f * kNumFeatures));
  m.layers.push_back(zero_layer(hidden, hidden, f * hidden));
  m.layers.push_back(zero_layer(concat, hidden, concat));
  const std::size_t last = concat_final ? concat + hidden : hidden;
  m.layers.push_back(zero_layer(last, 1, last));
  return m;
}

GnnModel make_constant_model(Architecture arch, bool positive) {
  GnnModel m = make_zero_model(arch);
  m.layers[3].bias[0] = positive ? 50.0 : -50.0;
  return m;
}

GnnModel make_random_model(Architecture arch, std::size_t hidden, Rng& rng, double scale, bool concat_final) {
  GnnModel m = make_zero_model(arch, hidden, concat_final);
  for (auto& l : m.layers) {
    for (double& w : l.weight) w = (rng.uniform() * 2 - 1) * scale;
    for (double& b : l.bias) b = (rng.uniform() * 2 - 1) * scale;
  }
  return m;
}

namespace {
constexpr const char* kFormatTag = "mwis-gnn-model";
constexpr int kFormatVersion = 1;
}  // namespace

std::string model_to_json(const GnnModel& model) {
  model.validate();
  nlohmann::json j;
  j["format"] = kFormatTag;
  j["version"] = kFormatVersion;
  j["architecture"] = architecture_name(model.arch);
  j["concat_final"] = model.concat_final;
  j["layers"] = nlohmann::json::array();
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const Layer& l = model.layers[i];
    j["layers"].push_back({{"kind", i < 2 ? "message_passing" : "dense"},
                           {"in", l.in},
                           {"out", l.out},
                           {"weight", l.weight},
                           {"bias", l.bias}});
  }
  return j.dump(1) + "\n";
}

GnnModel model_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != kFormatTag) throw ModelError("not a model file (format tag missing)");
    if (j.at("version").get<int>() != kFormatVersion)
      throw ModelError("unsupported model version " + j.at("version").dump());
    GnnModel m;
    m.arch = architecture_from_name(j.at("architecture").get<std::string>());
    m.concat_final = j.value("concat_final", false);
    for (const auto& jl : j.at("layers")) {
      Layer l;
      l.in = jl.at("in").get<std::size_t>();
      l.out = jl.at("out").get<std::size_t>();
      l.weight = jl.at("weight").get<std::vector<double>>();
      l.bias = jl.at("bias").get<std::vector<double>>();
      const std::string kind = jl.at("kind").get<std::string>();
      const bool mp = m.layers.size() < 2;
      if (kind != (mp ? "message_passing" : "dense"))
        throw ModelError("layer " + std::to_string(m.layers.size()) + " has kind \"" + kind + "\"");
      m.layers.push_back(std::move(l));
    }
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const GnnModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write " + path);
  out << model_to_json(model);
}

GnnModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return model_from_json(ss.str());
  } catch (const ModelError& e) {
    throw ModelError(path + ": " + e.what());
  }
}

}  // namespace mwis
