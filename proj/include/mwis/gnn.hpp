#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mwis/graph.hpp"
#include "mwis/rng.hpp"
#include "mwis/scheduler.hpp"

namespace mwis {

// Per-vertex inputs, in order: weight, neighborhood weight, min/max neighbor
// weight, degree, average/min/max neighbor degree.
inline constexpr std::size_t kNumFeatures = 8;
inline constexpr std::size_t kDefaultHidden = 16;

enum class Architecture { Gcn, Sage, Lr };

std::string_view architecture_name(Architecture a);
Architecture architecture_from_name(std::string_view name);

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Affine map out x cols, row-major. For message-passing layers cols is the
// layer input width (GCN) or twice it (SAGE and LR act on [H_u ; H_v]).
struct Layer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weight;
  std::vector<double> bias;

  std::size_t cols() const { return out == 0 ? 0 : weight.size() / out; }
};

// Two message-passing layers (ReLU), a dense layer over [X ; H1 ; H2] (ReLU)
// and a dense output layer (sigmoid). With concat_final the output layer also
// sees [X ; H1 ; H2 ; H3].
struct GnnModel {
  Architecture arch = Architecture::Gcn;
  std::vector<Layer> layers;
  bool concat_final = false;

  // Throws ModelError on any dimension inconsistency.
  void validate() const;
};

// n x kNumFeatures, row-major.
std::vector<float> extract_features(const StaticGraph& g);

std::vector<double> forward(const GnnModel& model, const StaticGraph& g, const std::vector<float>& features);
std::vector<double> predict(const GnnModel& model, const StaticGraph& g);

GnnModel make_zero_model(Architecture arch, std::size_t hidden = kDefaultHidden, bool concat_final = false);
// Zero weights with a saturating output bias: scores ~1 (positive) or ~0.
GnnModel make_constant_model(Architecture arch, bool positive);
GnnModel make_random_model(Architecture arch, std::size_t hidden, Rng& rng, double scale = 0.5,
                           bool concat_final = false);

std::string model_to_json(const GnnModel& model);
GnnModel model_from_json(std::string_view text);
void save_model(const GnnModel& model, const std::string& path);
GnnModel load_model(const std::string& path);

class GnnScorer : public VertexScorer {
 public:
  explicit GnnScorer(GnnModel model) : model_(std::move(model)) { model_.validate(); }
  std::vector<double> score(const StaticGraph& g) const override { return predict(model_, g); }
  const GnnModel& model() const { return model_; }

 private:
  GnnModel model_;
};

}  // namespace mwis
