#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace crowdspan::kernel {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

struct GradientCheckStats {
  std::size_t instances = 0;
  std::size_t coordinates = 0;
  double max_relative_error = 0.0;
};

// Central differences of total_loss against the analytic gradient on seeded
// random toy-scorer instances (n x d hidden states, lambda alternating over
// the given values).
GradientCheckStats finite_difference_check(std::size_t instances, std::size_t n, std::size_t d,
                                           const std::vector<double>& lambdas, double epsilon, std::uint64_t seed);

// Mask identities, softmax and loss properties, and the gradient check.
CheckReport run_kernel_checks(std::uint64_t seed, std::size_t gradient_instances = 100);

}  // namespace crowdspan::kernel
