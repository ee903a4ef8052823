#include "crowdspan/kernel.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "crowdspan/error.hpp"
#include "crowdspan/random.hpp"

namespace crowdspan::kernel {

Vector Matrix::times(std::span<const double> v) const {
  if (v.size() != cols_) throw DomainError("matrix-vector product: dimension mismatch");
  Vector out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) acc += data_[r * cols_ + c] * v[c];
    out[r] = acc;
  }
  return out;
}

Vector Matrix::transpose_times(std::span<const double> v) const {
  if (v.size() != rows_) throw DomainError("transposed matrix-vector product: dimension mismatch");
  Vector out(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out[c] += data_[r * cols_ + c] * v[r];
  }
  return out;
}

SpanTargets SpanTargets::from_span(std::size_t start, std::size_t end, std::size_t n) {
  if (start > end || end >= n) throw DomainError("span targets need start <= end < n");
  SpanTargets t{Vector(n, 0.0), Vector(n, 0.0)};
  t.x[start] = 1.0;
  t.y[end] = 1.0;
  return t;
}

void ParamGradients::add(const ParamGradients& other, double scale) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += scale * other.a[i];
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += scale * other.c[i];
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += scale * other.w[i];
  b += scale * other.b;
}

Vector softmax(std::span<const double> logits) {
  if (logits.empty()) return {};
  const double peak = *std::max_element(logits.begin(), logits.end());
  Vector out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

Vector build_mask(std::span<const double> x_hat, std::span<const double> y_hat) {
  if (x_hat.size() != y_hat.size()) throw DomainError("build_mask: start and end vectors differ in length");
  const std::size_t n = x_hat.size();
  Vector reverse_end(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) reverse_end[k] = reverse_end[k + 1] + y_hat[k];
  Vector mask(n);
  double forward_start = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    forward_start += x_hat[k];
    mask[k] = forward_start * reverse_end[k];
  }
  return mask;
}

double l1_penalty(std::span<const double> mask) {
  double sum = 0.0;
  for (double m : mask) sum += std::abs(m);
  return sum;
}

Pooled masked_max_pool(std::span<const double> mask, const HiddenStates& h) {
  if (mask.size() != h.rows()) throw DomainError("masked_max_pool: mask length does not match hidden-state rows");
  Pooled p{Vector(h.cols(), 0.0), std::vector<std::size_t>(h.cols(), 0)};
  if (h.rows() == 0) return p;
  for (std::size_t c = 0; c < h.cols(); ++c) {
    double best = mask[0] * h(0, c);
    std::size_t arg = 0;
    for (std::size_t r = 1; r < h.rows(); ++r) {
      const double v = mask[r] * h(r, c);
      if (v > best) {
        best = v;
        arg = r;
      }
    }
    p.values[c] = best;
    p.argmax_rows[c] = arg;
  }
  return p;
}

double predict_coarse(std::span<const double> mask, const HiddenStates& h, const RegressionHead& head) {
  if (head.w.size() != h.cols()) throw DomainError("predict_coarse: head width does not match hidden-state width");
  const Pooled pooled = masked_max_pool(mask, h);
  return std::inner_product(head.w.begin(), head.w.end(), pooled.values.begin(), head.b);
}

double total_loss(const LossInputs& in, std::span<const double> mask) {
  double loss = 0.0;
  if (in.targets) {
    const auto& t = *in.targets;
    if (t.x.size() != in.n() || t.y.size() != in.n() || in.y_hat.size() != in.n())
      throw DomainError("total_loss: vectors differ in length");
    for (std::size_t i = 0; i < in.n(); ++i) {
      if (t.x[i] != 0.0) loss -= t.x[i] * std::log(std::max(in.x_hat[i], kLogFloor));
      if (t.y[i] != 0.0) loss -= t.y[i] * std::log(std::max(in.y_hat[i], kLogFloor));
    }
  }
  if (in.z) {
    const double err = in.z_hat - *in.z;
    loss += err * err;
  }
  loss += in.lambda * l1_penalty(mask);
  return loss;
}

ForwardPass forward(const HiddenStates& h, const ScorerParams& params, const Example& example, double lambda) {
  ForwardPass f;
  f.x_hat = softmax(h.times(params.a));
  f.y_hat = softmax(h.times(params.c));
  f.mask = build_mask(f.x_hat, f.y_hat);
  f.pooled = masked_max_pool(f.mask, h);
  f.z_hat = std::inner_product(params.head.w.begin(), params.head.w.end(), f.pooled.values.begin(), params.head.b);
  LossInputs in{example.targets, f.x_hat, f.y_hat, example.z, f.z_hat, lambda};
  f.loss = total_loss(in, f.mask);
  return f;
}

namespace {

// Pulls a gradient on probabilities back through the softmax.
Vector softmax_backward(const Vector& probs, const Vector& grad_probs) {
  double dot = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) dot += probs[i] * grad_probs[i];
  Vector out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) out[i] = probs[i] * (grad_probs[i] - dot);
  return out;
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

LossAndGradient gradients(const HiddenStates& h, const ScorerParams& params, const Example& example, double lambda) {
  const std::size_t n = h.rows();
  const std::size_t d = h.cols();
  const ForwardPass f = forward(h, params, example, lambda);

  LossAndGradient out{f.loss, ParamGradients::zeros(d)};

  // d loss / d mask
  Vector grad_mask(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) grad_mask[k] = lambda * sign(f.mask[k]);
  if (example.z) {
    const double r = 2.0 * (f.z_hat - *example.z);
    out.grad.b = r;
    for (std::size_t j = 0; j < d; ++j) {
      out.grad.w[j] = r * f.pooled.values[j];
      const std::size_t row = f.pooled.argmax_rows[j];
      grad_mask[row] += r * params.head.w[j] * h(row, j);
    }
  }

  // mask_k = F_k * G_k, F = cumsum(x_hat), G = reverse cumsum(y_hat).
  Vector cum_start(n), rev_end(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) cum_start[k] = (acc += f.x_hat[k]);
  acc = 0.0;
  for (std::size_t k = n; k-- > 0;) rev_end[k] = (acc += f.y_hat[k]);

  // d/dx_hat_i = sum_{k>=i} g_k G_k ; d/dy_hat_i = sum_{k<=i} g_k F_k
  Vector grad_x(n), grad_y(n);
  acc = 0.0;
  for (std::size_t i = n; i-- > 0;) grad_x[i] = (acc += grad_mask[i] * rev_end[i]);
  acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) grad_y[i] = (acc += grad_mask[i] * cum_start[i]);

  if (example.targets) {
    const auto& t = *example.targets;
    for (std::size_t i = 0; i < n; ++i) {
      if (t.x[i] != 0.0 && f.x_hat[i] > kLogFloor) grad_x[i] -= t.x[i] / f.x_hat[i];
      if (t.y[i] != 0.0 && f.y_hat[i] > kLogFloor) grad_y[i] -= t.y[i] / f.y_hat[i];
    }
  }

  out.grad.a = h.transpose_times(softmax_backward(f.x_hat, grad_x));
  out.grad.c = h.transpose_times(softmax_backward(f.y_hat, grad_y));
  return out;
}

std::vector<ToyDocument> make_toy_dataset(const ToyDataConfig& config) {
  if (config.min_span == 0 || config.min_span > config.max_span || config.max_span > config.n)
    throw ConfigError("toy dataset needs 0 < min_span <= max_span <= n");
  Rng rng(config.seed);
  Vector direction(config.d);
  double norm = 0.0;
  for (double& v : direction) {
    v = rng.normal();
    norm += v * v;
  }
  norm = std::sqrt(norm);
  for (double& v : direction) v /= norm;

  std::vector<ToyDocument> docs;
  docs.reserve(config.documents);
  for (std::size_t k = 0; k < config.documents; ++k) {
    ToyDocument doc;
    doc.h = Matrix(config.n, config.d);
    for (std::size_t r = 0; r < config.n; ++r)
      for (std::size_t c = 0; c < config.d; ++c) doc.h(r, c) = rng.normal();
    doc.label = static_cast<int>(rng.below(4));
    const auto len = static_cast<std::size_t>(
        rng.between(static_cast<std::int64_t>(config.min_span), static_cast<std::int64_t>(config.max_span)));
    doc.span_begin = static_cast<std::size_t>(rng.below(config.n - len + 1));
    doc.span_end = doc.span_begin + len;
    const double scale = static_cast<double>(doc.label + 1);
    for (std::size_t r = doc.span_begin; r < doc.span_end; ++r)
      for (std::size_t c = 0; c < config.d; ++c) doc.h(r, c) += scale * direction[c];
    docs.push_back(std::move(doc));
  }
  return docs;
}

namespace {

Example coarse_only(const ToyDocument& doc) { return Example{std::nullopt, static_cast<double>(doc.label)}; }

LossAndGradient reduce_in_order(std::span<const LossAndGradient> parts, std::size_t d) {
  LossAndGradient total{0.0, ParamGradients::zeros(d)};
  if (parts.empty()) return total;
  const double scale = 1.0 / static_cast<double>(parts.size());
  for (const auto& p : parts) {
    total.loss += p.loss * scale;
    total.grad.add(p.grad, scale);
  }
  return total;
}

}  // namespace

LossAndGradient batch_gradient_serial(std::span<const ToyDocument> docs, const ScorerParams& params, double lambda) {
  std::vector<LossAndGradient> parts;
  parts.reserve(docs.size());
  for (const auto& doc : docs) parts.push_back(gradients(doc.h, params, coarse_only(doc), lambda));
  return reduce_in_order(parts, params.dim());
}

LossAndGradient batch_gradient(std::span<const ToyDocument> docs, const ScorerParams& params, double lambda,
                               int threads) {
  std::vector<LossAndGradient> parts(docs.size());
  const auto count = static_cast<std::int64_t>(docs.size());
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(team)
  for (std::int64_t i = 0; i < count; ++i) {
    const ToyDocument& doc = docs[static_cast<std::size_t>(i)];
    parts[static_cast<std::size_t>(i)] = gradients(doc.h, params, coarse_only(doc), lambda);
  }
  // Per-document results are summed in document order so the result does
  // not depend on the thread count.
  return reduce_in_order(parts, params.dim());
}

ScorerParams init_params(std::size_t d, std::uint64_t seed, double scale) {
  Rng rng(seed);
  ScorerParams p{Vector(d), Vector(d), RegressionHead{Vector(d), 0.0}};
  for (double& v : p.a) v = scale * rng.normal();
  for (double& v : p.c) v = scale * rng.normal();
  for (double& v : p.head.w) v = scale * rng.normal();
  return p;
}

double planted_span_mass(std::span<const double> mask, std::size_t begin, std::size_t end) {
  const double total = l1_penalty(mask);
  if (total == 0.0) return 0.0;
  double inside = 0.0;
  for (std::size_t k = begin; k < end && k < mask.size(); ++k) inside += std::abs(mask[k]);
  return inside / total;
}

TrainingTrace toy_fit(std::span<const ToyDocument> docs, const ToyFitConfig& config) {
  if (docs.empty()) throw ConfigError("toy_fit needs at least one document");
  const std::size_t d = docs.front().h.cols();
  TrainingTrace trace;
  trace.params = init_params(d, config.seed, config.init_scale);
  ScorerParams& p = trace.params;
  trace.losses.reserve(config.steps);

  for (std::size_t step = 0; step < config.steps; ++step) {
    const LossAndGradient lg = batch_gradient(docs, p, config.lambda, config.threads);
    trace.losses.push_back(lg.loss);
    for (std::size_t j = 0; j < d; ++j) {
      p.a[j] -= config.learning_rate * lg.grad.a[j];
      p.c[j] -= config.learning_rate * lg.grad.c[j];
      p.head.w[j] -= config.learning_rate * lg.grad.w[j];
    }
    p.head.b -= config.learning_rate * lg.grad.b;
  }

  double final_loss = 0.0;
  double mass = 0.0;
  for (const auto& doc : docs) {
    ForwardPass f = forward(doc.h, p, coarse_only(doc), config.lambda);
    final_loss += f.loss;
    const double share = planted_span_mass(f.mask, doc.span_begin, doc.span_end);
    trace.planted_mass.push_back(share);
    mass += share;
    trace.final_masks.push_back(std::move(f.mask));
  }
  const auto count = static_cast<double>(docs.size());
  trace.final_loss = final_loss / count;
  trace.mean_planted_mass = mass / count;
  trace.initial_loss = trace.losses.empty() ? trace.final_loss : trace.losses.front();
  return trace;
}

}  // namespace crowdspan::kernel
