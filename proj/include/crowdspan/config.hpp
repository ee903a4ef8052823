#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "crowdspan/heuristic.hpp"
#include "crowdspan/kernel.hpp"
#include "crowdspan/shingler.hpp"

namespace crowdspan {

// Defaults: 450-token windows stepped by 225
// inside 512-slot sequences, and the eight crowd keywords.
struct Config {
  HeuristicOptions heuristic;
  ShingleConfig shingle;
  kernel::ToyDataConfig toy_data;
  kernel::ToyFitConfig toy_fit;
  std::uint64_t seed = 7;
  int threads = 0;
};

// Throws ConfigError for empty tables or inconsistent window sizes.
void validate(const Config& config);

// Applies overrides from a JSON document onto the defaults. Unknown keys are
// rejected. Throws ConfigError.
Config config_from_json(const std::string& json_text);
Config load_config(const std::filesystem::path& path);

// The full effective configuration, in the same schema config_from_json reads.
std::string config_to_json(const Config& config);

}  // namespace crowdspan
