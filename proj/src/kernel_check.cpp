#include "crowdspan/kernel_check.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crowdspan/kernel.hpp"
#include "crowdspan/random.hpp"

namespace crowdspan::kernel {

namespace {

Vector random_probabilities(Rng& rng, std::size_t n) {
  Vector logits(n);
  for (double& v : logits) v = 3.0 * rng.normal();
  return softmax(logits);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

bool CheckReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

GradientCheckStats finite_difference_check(std::size_t instances, std::size_t n, std::size_t d,
                                           const std::vector<double>& lambdas, double epsilon, std::uint64_t seed) {
  Rng rng(seed);
  GradientCheckStats stats;
  for (std::size_t t = 0; t < instances; ++t) {
    Matrix h(n, d);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < d; ++c) h(r, c) = rng.normal();
    ScorerParams p = init_params(d, rng.next(), 1.0);
    p.head.b = rng.normal();
    Example ex;
    if (rng.below(2) == 0) {
      const auto s = static_cast<std::size_t>(rng.below(n));
      const auto e = s + static_cast<std::size_t>(rng.below(n - s));
      ex.targets = SpanTargets::from_span(s, e, n);
    }
    ex.z = 3.0 * rng.uniform();
    const double lambda = lambdas.empty() ? 0.0 : lambdas[t % lambdas.size()];

    const LossAndGradient analytic = gradients(h, p, ex, lambda);
    auto probe = [&](double& slot, double value) {
      const double saved = slot;
      slot = saved + epsilon;
      const double up = forward(h, p, ex, lambda).loss;
      slot = saved - epsilon;
      const double down = forward(h, p, ex, lambda).loss;
      slot = saved;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double scale = std::max(std::abs(value), std::abs(numeric));
      const double rel = scale < 1e-10 ? 0.0 : std::abs(value - numeric) / scale;
      stats.max_relative_error = std::max(stats.max_relative_error, rel);
      ++stats.coordinates;
    };
    for (std::size_t j = 0; j < d; ++j) {
      probe(p.a[j], analytic.grad.a[j]);
      probe(p.c[j], analytic.grad.c[j]);
      probe(p.head.w[j], analytic.grad.w[j]);
    }
    probe(p.head.b, analytic.grad.b);
    ++stats.instances;
  }
  return stats;
}

CheckReport run_kernel_checks(std::uint64_t seed, std::size_t gradient_instances) {
  CheckReport report;
  Rng rng(seed);

  {
    constexpr std::size_t n = 16;
    std::size_t failures = 0;
    std::size_t cases = 0;
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t e = s; e < n; ++e) {
        const SpanTargets t = SpanTargets::from_span(s, e, n);
        const Vector mask = build_mask(t.x, t.y);
        bool ok = true;
        for (std::size_t k = 0; k < n; ++k) ok = ok && mask[k] == ((k >= s && k <= e) ? 1.0 : 0.0);
        ok = ok && l1_penalty(mask) == static_cast<double>(e - s + 1);
        failures += ok ? 0 : 1;
        ++cases;
      }
    }
    report.checks.push_back({"mask_one_hot_indicator", failures == 0,
                             std::to_string(cases - failures) + "/" + std::to_string(cases) + " spans exact"});
  }

  {
    const Vector uniform(4, 0.25);
    const Vector mask = build_mask(uniform, uniform);
    const Vector expected = {0.25, 0.375, 0.375, 0.25};
    double err = 0.0;
    for (std::size_t k = 0; k < 4; ++k) err = std::max(err, std::abs(mask[k] - expected[k]));
    report.checks.push_back({"mask_uniform_closed_form", err <= 1e-12, "max error " + fmt(err)});
  }

  {
    bool ok = true;
    for (int t = 0; t < 200 && ok; ++t) {
      const std::size_t n = 1 + static_cast<std::size_t>(rng.below(32));
      const Vector mask = build_mask(random_probabilities(rng, n), random_probabilities(rng, n));
      for (double m : mask) ok = ok && m >= 0.0 && m <= 1.0 + 1e-12;
      ok = ok && l1_penalty(mask) <= static_cast<double>(n) + 1e-9;
    }
    report.checks.push_back({"mask_bounds", ok, "200 random probability pairs"});
  }

  {
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      const std::size_t n = 1 + static_cast<std::size_t>(rng.below(64));
      Vector logits(n);
      for (double& v : logits) v = 5.0 * rng.normal();
      const Vector p = softmax(logits);
      const double shift = 10.0 * rng.normal();
      for (double& v : logits) v += shift;
      const Vector q = softmax(logits);
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(p[i] - q[i]));
        sum += p[i];
      }
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    report.checks.push_back({"softmax_normalized_and_shift_invariant", worst <= 1e-12, "max deviation " + fmt(worst)});
  }

  {
    bool ok = true;
    for (int t = 0; t < 200 && ok; ++t) {
      const std::size_t n = 2 + static_cast<std::size_t>(rng.below(30));
      LossInputs in;
      in.x_hat = random_probabilities(rng, n);
      in.y_hat = random_probabilities(rng, n);
      const auto s = static_cast<std::size_t>(rng.below(n));
      in.targets = SpanTargets::from_span(s, s + static_cast<std::size_t>(rng.below(n - s)), n);
      in.z = static_cast<double>(rng.below(4));
      in.z_hat = 4.0 * rng.normal();
      in.lambda = rng.uniform();
      ok = total_loss(in, build_mask(in.x_hat, in.y_hat)) >= 0.0;
    }
    report.checks.push_back({"loss_nonnegative", ok, "200 random instances"});
  }

  {
    const GradientCheckStats stats = finite_difference_check(gradient_instances, 16, 4, {0.0, 0.01}, 1e-5, rng.next());
    report.checks.push_back({"gradient_finite_difference", stats.max_relative_error <= 1e-4,
                             std::to_string(stats.instances) + " instances, max relative error " +
                                 fmt(stats.max_relative_error)});
  }
  return report;
}

}  // namespace crowdspan::kernel
