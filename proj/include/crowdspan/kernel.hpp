#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace crowdspan::kernel {

using Vector = std::vector<double>;

// Dense row-major matrix; rows are token positions.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  // this * v, v of length cols().
  Vector times(std::span<const double> v) const;
  // this^T * v, v of length rows().
  Vector transpose_times(std::span<const double> v) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

using HiddenStates = Matrix;

struct RegressionHead {
  Vector w;
  double b = 0.0;
};

// One-hot start/end indicators. Impossible answers put both on position 0.
struct SpanTargets {
  Vector x;
  Vector y;

  // Throws DomainError unless start <= end < n.
  static SpanTargets from_span(std::size_t start, std::size_t end, std::size_t n);
};

// Everything the combined loss reads. Absent targets drop their term.
struct LossInputs {
  std::optional<SpanTargets> targets;
  Vector x_hat;
  Vector y_hat;
  std::optional<double> z;
  double z_hat = 0.0;
  double lambda = 0.01;

  std::size_t n() const { return x_hat.size(); }
};

inline constexpr double kLogFloor = 1e-12;

Vector softmax(std::span<const double> logits);

// mask_k = (sum_{i<=k} x_hat_i) * (sum_{i>=k} y_hat_i). Throws DomainError on
// a length mismatch.
Vector build_mask(std::span<const double> x_hat, std::span<const double> y_hat);

double l1_penalty(std::span<const double> mask);

// Column-wise max over rows of mask (.) H, plus the first row attaining each max.
struct Pooled {
  Vector values;
  std::vector<std::size_t> argmax_rows;
};
Pooled masked_max_pool(std::span<const double> mask, const HiddenStates& h);

// z_hat = w . maxpool(mask (.) H) + b. Throws DomainError on dimension mismatch.
double predict_coarse(std::span<const double> mask, const HiddenStates& h, const RegressionHead& head);

// Cross-entropy on the span targets + squared error on the coarse label +
// lambda * L1(mask). Probabilities are floored at kLogFloor before the log.
double total_loss(const LossInputs& inputs, std::span<const double> mask);

// Toy scorer: start logits = H a, end logits = H c, followed by the
// regression head.
struct ScorerParams {
  Vector a;
  Vector c;
  RegressionHead head;

  std::size_t dim() const { return a.size(); }
};

struct ParamGradients {
  Vector a;
  Vector c;
  Vector w;
  double b = 0.0;

  static ParamGradients zeros(std::size_t d) { return {Vector(d, 0.0), Vector(d, 0.0), Vector(d, 0.0), 0.0}; }
  void add(const ParamGradients& other, double scale = 1.0);
};

// Supervision for one sequence.
struct Example {
  std::optional<SpanTargets> targets;
  std::optional<double> z;
};

struct ForwardPass {
  Vector x_hat;
  Vector y_hat;
  Vector mask;
  Pooled pooled;
  double z_hat = 0.0;
  double loss = 0.0;
};

ForwardPass forward(const HiddenStates& h, const ScorerParams& params, const Example& example, double lambda);

struct LossAndGradient {
  double loss = 0.0;
  ParamGradients grad;
};

// Analytic gradient of total_loss with respect to a, c, w and b. Max-pool
// ties route the subgradient to the first maximizing row.
LossAndGradient gradients(const HiddenStates& h, const ScorerParams& params, const Example& example, double lambda);

// --- synthetic upsampling task ---------------------------------------------

struct ToyDocument {
  HiddenStates h;
  int label = 0;
  std::size_t span_begin = 0;  // planted rows [span_begin, span_end)
  std::size_t span_end = 0;
};

struct ToyDataConfig {
  std::size_t documents = 40;
  std::size_t n = 32;
  std::size_t d = 8;
  std::size_t min_span = 2;
  std::size_t max_span = 5;
  std::uint64_t seed = 7;
};

// Unit-normal rows; a planted span of 2..5 rows gets a fixed unit direction
// scaled by (label + 1) added to it.
std::vector<ToyDocument> make_toy_dataset(const ToyDataConfig& config);

// Mean loss and mean gradient over coarse-label-only examples, documents
// processed in parallel and reduced in document order.
LossAndGradient batch_gradient(std::span<const ToyDocument> docs, const ScorerParams& params, double lambda,
                               int threads = 0);

// Single-threaded reference for batch_gradient.
LossAndGradient batch_gradient_serial(std::span<const ToyDocument> docs, const ScorerParams& params, double lambda);

struct ToyFitConfig {
  std::size_t steps = 500;
  double learning_rate = 0.05;
  double lambda = 0.01;
  std::uint64_t seed = 7;
  double init_scale = 0.1;
  int threads = 1;
};

struct TrainingTrace {
  Vector losses;  // mean loss before each step
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::vector<Vector> final_masks;
  Vector planted_mass;  // per document
  double mean_planted_mass = 0.0;
  ScorerParams params;
};

ScorerParams init_params(std::size_t d, std::uint64_t seed, double scale);

// Plain full-batch gradient descent on the coarse + L1 terms.
TrainingTrace toy_fit(std::span<const ToyDocument> docs, const ToyFitConfig& config);

// Share of the mask's total mass that falls on rows [begin, end).
double planted_span_mass(std::span<const double> mask, std::size_t begin, std::size_t end);

}  // namespace crowdspan::kernel
