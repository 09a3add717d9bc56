#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pfreal/eliminant.hpp"
#include "pfreal/errors.hpp"
#include "pfreal/io.hpp"
#include "pfreal/monodromy.hpp"
#include "pfreal/survey.hpp"

using namespace pfreal;

namespace {

// Exit codes: 0 ok, 1 unexpected, 2 usage or input, 3 structural, 4 precision.
constexpr int kUsage = 2;
constexpr int kStructural = 3;
constexpr int kPrecision = 4;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"All complex power flow solutions by homotopy continuation"};
  app.require_subcommand(1);

  std::string system_path;
  std::uint64_t seed = 0;
  std::string format = "csv";
  auto* solve = app.add_subcommand("solve", "Enumerate and classify every complex solution");
  solve->add_option("--system", system_path, "System JSON file")->required();
  solve->add_option("--seed", seed, "Seed for the homotopy constant");
  solve->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  auto* elim = app.add_subcommand("eliminant", "Univariate eliminant of a lossless zero-injection PV network");
  elim->add_option("--system", system_path, "System JSON file")->required();
  elim->add_option("--seed", seed, "Seed for the homotopy constant");

  MonodromyConfig mcfg;
  std::string slice = "zero-injection";
  auto* mono = app.add_subcommand("monodromy", "Monodromy group from random parameter loops");
  mono->add_option("--system", system_path, "System JSON file")->required();
  mono->add_option("--budget", mcfg.budget, "Stop after this many consecutive loops that add nothing")
      ->check(CLI::PositiveNumber);
  mono->add_option("--seed", mcfg.seed, "Loop sampling seed");
  mono->add_option("--slice", slice, "Parameter space")->check(CLI::IsMember({"zero-injection", "full"}));
  mono->add_option("--scale", mcfg.loop_scale, "Loop size relative to the base parameter norm")
      ->check(CLI::PositiveNumber);

  SurveyConfig scfg;
  std::string out_path, summary_path;
  int workers = 0;
  auto* survey = app.add_subcommand("survey", "Random four-bus instances with Gaussian susceptances");
  survey->add_option("--n", scfg.n_instances, "Number of instances")->required()->check(CLI::PositiveNumber);
  survey->add_option("--sigma", scfg.sigma, "Standard deviation")->check(CLI::PositiveNumber);
  survey->add_option("--mean", scfg.mean, "Mean");
  survey->add_option("--seed", scfg.seed, "Sampling seed");
  survey->add_option("--out", out_path, "Per-instance CSV path")->required();
  survey->add_option("--summary", summary_path, "Write the JSON summary here instead of stdout");
  survey->add_option("--workers", workers, "Worker threads (default: PFREAL_WORKERS or 1)")
      ->check(CLI::PositiveNumber);

  int n_buses = 0;
  auto* bound = app.add_subcommand("bound", "Complex solution bound and Bezout number");
  bound->add_option("--n", n_buses, "Number of buses")->required()->check(CLI::Range(2, 33));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*solve) {
      const PowerSystem ps = load_system(system_path);
      const SolveReport r = solve_report(ps, seed);
      std::cout << (format == "json" ? solutions_json(ps, r) + "\n" : solutions_csv(ps, r));
      for (double im : r.ambiguous_imag)
        std::cerr << "warning: solution with imaginary part " << im << " near the real tolerance\n";
      if (r.failed > 0) {
        std::cerr << "error: " << r.failed << " paths failed after retry\n";
        return kStructural;
      }
    } else if (*elim) {
      const PowerSystem ps = load_system(system_path);
      const SolutionSet ss = solve_all(build_system(ps), HomotopyConfig::from_seed(seed));
      std::cout << eliminant_json(ps, count_real_via_eliminant(ps, ss)) << "\n";
    } else if (*mono) {
      mcfg.slice = parse_slice(slice);
      const PowerSystem ps = load_system(system_path);
      std::cout << to_json(generate_group(ps, mcfg)) << "\n";
    } else if (*survey) {
      scfg.workers = workers > 0 ? workers : workers_from_env(1);
      const SurveyResult r = run_survey(scfg);
      write_file(out_path, survey_csv(r));
      const std::string summary = survey_summary_json(r, scfg) + "\n";
      if (summary_path.empty())
        std::cout << summary;
      else
        write_file(summary_path, summary);
    } else if (*bound) {
      std::cout << "complex_bound " << complex_bound(n_buses) << "\n"
                << "bezout_bound " << bezout_bound(n_buses) << "\n";
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kStructural;
  } catch (const PrecisionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecision;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
