#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pfreal/power_system.hpp"

namespace pfreal {

inline constexpr std::size_t kSurveyLines = 6;
using Susceptances = std::array<double, kSurveyLines>;  // b12, b13, b14, b23, b24, b34

/// Four-bus network: bus 1 slack, buses 2-4 PV, unit magnitudes, complete graph.
PowerSystem four_bus_network(const Susceptances& b, const std::array<double, 3>& p = {0.0, 0.0, 0.0});

// SplitMix64 finalizer; used to derive independent per-instance seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Normal deviates from std::mt19937_64 (whose output sequence the C++
/// standard fixes) through the Box-Muller transform on 53-bit uniforms, so a
/// seed gives the same samples on every conforming platform.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed);
  double operator()(double mean, double sigma);

 private:
  double uniform();  // (0, 1]

  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

struct SurveyConfig {
  std::size_t n_instances = 1000;
  double sigma = 8.0;
  double mean = 0.0;
  std::uint64_t seed = 0;
  std::array<double, 3> injections{0.0, 0.0, 0.0};  // P at buses 2-4
  int workers = 1;
  std::size_t witnesses_per_bin = 5;
  // Eliminant cross-check on every k-th instance (0 disables). Zero injections only.
  std::size_t crosscheck_every = 100;
  // Replaces the Gaussian draw; receives the instance index.
  std::function<Susceptances(std::size_t)> sampler;

  void validate() const;
};

struct SurveyRow {
  std::size_t instance = 0;
  std::uint64_t seed_offset = 0;  // per-instance seed: sampler and homotopy gamma
  Susceptances b{};
  int n_complex = 0;
  int n_real = 0;
  int n_trivial = 0;
  std::string status;  // "ok", "failed", "mismatch"
};

struct SurveyResult {
  std::vector<SurveyRow> rows;  // in instance order
  std::map<int, std::size_t> histogram;  // real count -> instances
  int max_real = 0;
  std::map<int, std::vector<Susceptances>> witnesses;  // first instances of each bin
  std::size_t failures = 0;
  std::size_t crosschecked = 0;
  std::size_t crosscheck_mismatches = 0;
};

/// Per instance: draw six susceptances, build the four-bus PV network, solve,
/// count real and trivial solutions. Instances run on cfg.workers threads and
/// land in index order, so the result does not depend on the schedule.
/// Instances with failed paths after the retry count as failures and stay out
/// of the histogram; so do eliminant mismatches.
SurveyResult run_survey(const SurveyConfig& cfg);

SurveyRow survey_instance(const SurveyConfig& cfg, std::size_t instance);

// instance,seed_offset,b12,...,b34,n_complex,n_real,n_trivial,status
std::string survey_csv(const SurveyResult& r);
std::string survey_summary_json(const SurveyResult& r, const SurveyConfig& cfg);

// Value of PFREAL_WORKERS when set to a positive integer, otherwise fallback.
int workers_from_env(int fallback);

}  // namespace pfreal
