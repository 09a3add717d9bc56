#include "pfreal/survey.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <thread>

#include <json.hpp>

#include "pfreal/classify.hpp"
#include "pfreal/eliminant.hpp"
#include "pfreal/errors.hpp"
#include "pfreal/tracker.hpp"

namespace pfreal {

PowerSystem four_bus_network(const Susceptances& b, const std::array<double, 3>& p) {
  PowerSystem ps;
  ps.buses = {{1, BusKind::slack, 1.0, 0.0, 0.0},
              {2, BusKind::pv, 1.0, p[0], 0.0},
              {3, BusKind::pv, 1.0, p[1], 0.0},
              {4, BusKind::pv, 1.0, p[2], 0.0}};
  ps.lines = {{1, 2, b[0]}, {1, 3, b[1]}, {1, 4, b[2]}, {2, 3, b[3]}, {2, 4, b[4]}, {3, 4, b[5]}};
  return ps;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

GaussianSampler::GaussianSampler(std::uint64_t seed) : engine_(seed) {}

double GaussianSampler::uniform() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

double GaussianSampler::operator()(double mean, double sigma) {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return mean + sigma * z;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(theta);
  return mean + sigma * r * std::cos(theta);
}

void SurveyConfig::validate() const {
  if (n_instances < 1) throw InvalidInput("survey needs at least one instance");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("sigma must be positive");
  if (!std::isfinite(mean)) throw InvalidInput("mean must be finite");
  if (workers < 1) throw InvalidInput("workers must be at least 1");
}

namespace {

bool zero_injections(const SurveyConfig& cfg) {
  for (double p : cfg.injections)
    if (p != 0.0) return false;
  return true;
}

// check: 1 checked and agreed, 0 not checked, -1 disagreed.
SurveyRow evaluate(const SurveyConfig& cfg, std::size_t instance, bool want_check, int& check) {
  SurveyRow row;
  row.instance = instance;
  row.seed_offset = splitmix64(cfg.seed + instance);
  if (cfg.sampler) {
    row.b = cfg.sampler(instance);
  } else {
    GaussianSampler normal(row.seed_offset);
    for (auto& b : row.b) b = normal(cfg.mean, cfg.sigma);
  }

  const PowerSystem ps = four_bus_network(row.b, cfg.injections);
  const SolutionSet ss = solve_all(build_system(ps), HomotopyConfig::from_seed(row.seed_offset));
  row.n_complex = static_cast<int>(ss.solutions.size());
  const RealSplit rs = split_real(ss);
  row.n_real = static_cast<int>(rs.real.size());
  row.n_trivial = static_cast<int>(split_trivial(ps, rs.real).trivial.size());
  row.status = ss.failed_count > 0 || ss.path_jumps > 0 ? "failed" : "ok";

  check = 0;
  if (want_check && row.status == "ok") {
    try {
      check = count_real_via_eliminant(ps, ss).via_eliminant == row.n_real ? 1 : -1;
    } catch (const NonGenericCoordinate&) {
      check = 0;
    } catch (const StructuralError&) {
      check = -1;
    }
  }
  return row;
}

}  // namespace

SurveyResult run_survey(const SurveyConfig& cfg) {
  cfg.validate();
  SurveyResult res;
  res.rows.resize(cfg.n_instances);
  std::vector<int> checks(cfg.n_instances, 0);
  const bool check = cfg.crosscheck_every > 0 && zero_injections(cfg);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cfg.n_instances; i = next++) {
      res.rows[i] = evaluate(cfg, i, check && i % cfg.crosscheck_every == 0, checks[i]);
    }
  };
  const auto nthreads = static_cast<std::size_t>(std::min<std::size_t>(cfg.workers, cfg.n_instances));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < cfg.n_instances; ++i) {
    SurveyRow& row = res.rows[i];
    if (checks[i] != 0) ++res.crosschecked;
    if (checks[i] < 0) {
      ++res.crosscheck_mismatches;
      row.status = "mismatch";
    }
    if (row.status != "ok") {
      ++res.failures;
      continue;
    }
    ++res.histogram[row.n_real];
    res.max_real = std::max(res.max_real, row.n_real);
    auto& w = res.witnesses[row.n_real];
    if (w.size() < cfg.witnesses_per_bin) w.push_back(row.b);
  }
  return res;
}

std::string survey_csv(const SurveyResult& r) {
  std::string out = "instance,seed_offset,b12,b13,b14,b23,b24,b34,n_complex,n_real,n_trivial,status\n";
  char buf[64];
  for (const auto& row : r.rows) {
    out += std::to_string(row.instance) + "," + std::to_string(row.seed_offset);
    for (double b : row.b) {
      std::snprintf(buf, sizeof buf, ",%.17g", b);
      out += buf;
    }
    out += "," + std::to_string(row.n_complex) + "," + std::to_string(row.n_real) + "," +
           std::to_string(row.n_trivial) + "," + row.status + "\n";
  }
  return out;
}

std::string survey_summary_json(const SurveyResult& r, const SurveyConfig& cfg) {
  nlohmann::ordered_json j;
  j["n_instances"] = cfg.n_instances;
  j["seed"] = cfg.seed;
  j["mean"] = cfg.mean;
  j["sigma"] = cfg.sigma;
  auto hist = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.histogram) hist[std::to_string(k)] = v;
  j["histogram"] = hist;
  j["max_real"] = r.max_real;
  j["failures"] = r.failures;
  j["crosschecked"] = r.crosschecked;
  j["crosscheck_mismatches"] = r.crosscheck_mismatches;
  auto wit = nlohmann::ordered_json::object();
  for (const auto& [k, list] : r.witnesses) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& b : list) arr.push_back(std::vector<double>(b.begin(), b.end()));
    wit[std::to_string(k)] = arr;
  }
  j["witnesses"] = wit;
  return j.dump(2);
}

SurveyRow survey_instance(const SurveyConfig& cfg, std::size_t instance) {
  int check = 0;
  return evaluate(cfg, instance, false, check);
}

int workers_from_env(int fallback) {
  const char* v = std::getenv("PFREAL_WORKERS");
  if (!v || !*v) return fallback;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024) return fallback;
  return static_cast<int>(n);
}

}  // namespace pfreal
