// lamopt: stacking-sequence optimization for symmetric laminates.
//
// Subcommands:
//   params    lamination parameters and stiffness matrices of a given stack
//   region    feasible region of xi^D at fixed ply counts (JSON/CSV export)
//   optimize  full bi-level weight optimization of a problem file
//   verify    brute-force hull/support checks of the feasible region
//
// Exit codes: 0 success, 2 input error, 3 outer infeasible, 4 inner
// rule-infeasible. Units: N, mm, MPa.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lamopt/io.hpp"
#include "lamopt/pipeline.hpp"
#include "lamopt/region.hpp"
#include "lamopt/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitOuterInfeasible = 3;
constexpr int kExitRuleInfeasible = 4;

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lamopt::Error(lamopt::errc::schema_error, "cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void writeFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lamopt::Error(lamopt::errc::schema_error, "cannot write file: " + path);
  out << text;
}

std::vector<int> parseCountsList(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      const int v = std::stoi(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw lamopt::Error(lamopt::errc::schema_error, "--counts: bad integer \"" + item + "\"");
    }
  }
  if (out.empty()) throw lamopt::Error(lamopt::errc::schema_error, "--counts: empty list");
  return out;
}

std::vector<double> parseAngleList(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      const double v = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw lamopt::Error(lamopt::errc::schema_error, "--angles: bad number \"" + item + "\"");
    }
  }
  return out;
}

int defaultThreads() {
  if (const char* env = std::getenv("LAMOPT_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

int runParams(const std::string& stack_path) {
  const lamopt::io::StackFile file = lamopt::io::parseStackFile(readFile(stack_path));
  std::cout << lamopt::io::paramsReportJson(file);
  return kExitOk;
}

int runRegion(const std::string& counts_text, const std::string& angles_text,
              const std::string& mode_name, const std::string& out_path,
              const std::string& csv_path) {
  const lamopt::PlyCounts counts(parseCountsList(counts_text));
  const lamopt::AngleSet angles(parseAngleList(angles_text));
  if (counts.total() < 1) {
    throw lamopt::Error(lamopt::errc::schema_error, "--counts: zero total plies");
  }
  const lamopt::XiMode mode = lamopt::io::parseXiMode(mode_name);
  const lamopt::FeasiblePolytope poly = lamopt::feasibleRegion(counts, angles, mode);
  const std::string text = lamopt::io::regionToJson(counts, angles.angles(), mode, poly);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    writeFile(out_path, text);
  }
  if (!csv_path.empty()) writeFile(csv_path, lamopt::io::regionVerticesCsv(poly));
  return kExitOk;
}

int runOptimize(const std::string& problem_path, const std::string& out_path, int threads_flag,
                bool with_timings) {
  const std::string bytes = readFile(problem_path);
  lamopt::DesignProblem problem = lamopt::io::parseProblem(bytes);
  if (threads_flag > 0) {
    problem.options.threads = threads_flag;
  } else if (problem.options.threads == 1) {
    problem.options.threads = defaultThreads();
  }

  const lamopt::DesignResult result = lamopt::runPipeline(problem);
  const std::string text =
      lamopt::io::resultToJson(result, problem, lamopt::io::problemDigest(bytes), with_timings);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    writeFile(out_path, text);
  }
  std::fprintf(stderr, "status: %s (outer %.1f ms, inner %.1f ms)\n", result.status.c_str(),
               result.outer_ms, result.inner_ms);
  if (result.exit_code == 3) return kExitOuterInfeasible;
  if (result.exit_code == 4) return kExitRuleInfeasible;
  return kExitOk;
}

int runVerify(const std::string& counts_text, const std::string& angles_text,
              const std::string& mode_name, int samples, std::uint64_t seed, double tol,
              int threads) {
  const lamopt::PlyCounts counts(parseCountsList(counts_text));
  const lamopt::AngleSet angles(parseAngleList(angles_text));
  if (counts.total() < 1) {
    throw lamopt::Error(lamopt::errc::schema_error, "--counts: zero total plies");
  }
  std::vector<lamopt::XiMode> modes;
  if (mode_name == "both") {
    modes = {lamopt::XiMode::midpoint, lamopt::XiMode::exact};
  } else {
    modes = {lamopt::io::parseXiMode(mode_name)};
  }
  if (threads < 1) threads = defaultThreads();

  bool all_pass = true;
  for (const lamopt::XiMode mode : modes) {
    const auto cloud = lamopt::bruteForceCloud(counts, angles, mode);
    const lamopt::FeasiblePolytope poly = lamopt::feasibleRegion(counts, angles, mode);

    double worst_hull = 0.0;
    for (const auto& [seq, xi] : cloud) {
      for (int i = 0; i < poly.facet_normals.rows(); ++i) {
        worst_hull = std::max(worst_hull,
                              poly.facet_normals.row(i).dot(xi) - poly.facet_offsets(i));
      }
      for (int i = 0; i < poly.eq_normals.rows(); ++i) {
        worst_hull =
            std::max(worst_hull, std::abs(poly.eq_normals.row(i).dot(xi) - poly.eq_offsets(i)));
      }
    }

    // Directions are drawn up front; the sample evaluations commute (max and
    // conjunction), so the chunked result equals the serial one.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<lamopt::Vec4> lambdas;
    for (int s = 0; s < samples; ++s) {
      lamopt::Vec4 lambda;
      do {
        for (int c = 0; c < 4; ++c) lambda(c) = gauss(rng);
      } while (lambda.norm() < 1e-12);
      lambdas.push_back(lambda / lambda.norm());
    }
    const auto evaluate = [&](size_t begin, size_t end, double& gap, bool& contiguous) {
      for (size_t s = begin; s < end; ++s) {
        const lamopt::SupportResult sup = lamopt::supportMax(counts, angles, lambdas[s], mode);
        double brute = -std::numeric_limits<double>::infinity();
        for (const auto& [seq, xi] : cloud) brute = std::max(brute, lambdas[s].dot(xi));
        gap = std::max(gap, std::abs(brute - sup.value));
        contiguous = contiguous && lamopt::isBlockContiguous(sup.argmax);
      }
    };
    double worst_support = 0.0;
    bool contiguous_ok = true;
    const int n_workers = std::max(1, std::min<int>(threads, samples));
    if (n_workers == 1) {
      evaluate(0, lambdas.size(), worst_support, contiguous_ok);
    } else {
      std::vector<double> gaps(static_cast<size_t>(n_workers), 0.0);
      std::vector<char> contig(static_cast<size_t>(n_workers), 1);
      std::vector<std::thread> pool;
      const size_t chunk =
          (lambdas.size() + static_cast<size_t>(n_workers) - 1) / static_cast<size_t>(n_workers);
      for (int t = 0; t < n_workers; ++t) {
        pool.emplace_back([&, t]() {
          const size_t lo = static_cast<size_t>(t) * chunk;
          const size_t hi = std::min(lambdas.size(), lo + chunk);
          bool ok = true;
          evaluate(lo, hi, gaps[static_cast<size_t>(t)], ok);
          contig[static_cast<size_t>(t)] = ok ? 1 : 0;
        });
      }
      for (std::thread& th : pool) th.join();
      for (int t = 0; t < n_workers; ++t) {
        worst_support = std::max(worst_support, gaps[static_cast<size_t>(t)]);
        contiguous_ok = contiguous_ok && contig[static_cast<size_t>(t)] == 1;
      }
    }

    const bool pass = worst_hull <= tol && worst_support <= tol && contiguous_ok;
    all_pass = all_pass && pass;
    std::printf("[%s] mode=%s cloud=%zu vertices=%zu hull_violation=%.3e support_gap=%.3e%s\n",
                pass ? "PASS" : "FAIL", lamopt::io::xiModeName(mode), cloud.size(),
                poly.vertices.size(), worst_hull, worst_support,
                contiguous_ok ? "" : " (non-contiguous maximizer)");
  }
  return all_pass ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bi-level stacking-sequence optimization for symmetric laminates (units: N, mm, MPa)"};
  app.set_version_flag("--version", lamopt::kToolVersion);
  app.require_subcommand(1);

  std::string stack_path;
  CLI::App* params = app.add_subcommand("params", "Lamination parameters of a stack file");
  params->add_option("stack-file", stack_path, "stacking-sequence JSON")->required();

  std::string counts_text, angles_text = "0,45,-45,90", mode_name = "midpoint";
  std::string out_path, csv_path;
  CLI::App* region = app.add_subcommand("region", "Export the feasible region of xi^D");
  region->add_option("--counts", counts_text, "plies per angle, e.g. 2,1,1,0")->required();
  region->add_option("--angles", angles_text, "angle set in degrees (default 0,45,-45,90)");
  region->add_option("--mode", mode_name, "midpoint|exact")->check(CLI::IsMember({"midpoint", "exact"}));
  region->add_option("--out", out_path, "output JSON path (default stdout)");
  region->add_option("--csv", csv_path, "also write vertices as CSV");

  std::string problem_path, result_path;
  int threads_flag = 0;
  bool with_timings = false;
  CLI::App* optimize = app.add_subcommand("optimize", "Solve a design problem file");
  optimize->add_option("problem", problem_path, "problem JSON")->required();
  optimize->add_option("-o,--out", result_path, "result JSON path (default stdout)");
  optimize->add_option("--threads", threads_flag, "worker threads (overrides LAMOPT_THREADS)");
  optimize->add_flag("--timings", with_timings, "include timings_ms in the result file");

  std::string v_counts, v_angles = "0,45,-45,90", v_mode = "both";
  int v_samples = 100;
  std::uint64_t v_seed = 0;
  double v_tol = 1e-9;
  int v_threads = 0;
  CLI::App* verify = app.add_subcommand("verify", "Hull/support theorem checks vs brute force");
  verify->add_option("--counts", v_counts, "plies per angle")->required();
  verify->add_option("--angles", v_angles, "angle set in degrees");
  verify->add_option("--mode", v_mode, "midpoint|exact|both")->check(CLI::IsMember({"midpoint", "exact", "both"}));
  verify->add_option("--samples", v_samples, "random support directions (default 100)");
  verify->add_option("--seed", v_seed, "RNG seed");
  verify->add_option("--tol", v_tol, "pass tolerance (default 1e-9)");
  verify->add_option("--threads", v_threads, "worker threads (overrides LAMOPT_THREADS)");

  try {
    app.parse(argc, argv);
    if (params->parsed()) return runParams(stack_path);
    if (region->parsed()) return runRegion(counts_text, angles_text, mode_name, out_path, csv_path);
    if (optimize->parsed()) return runOptimize(problem_path, result_path, threads_flag, with_timings);
    if (verify->parsed()) {
      return runVerify(v_counts, v_angles, v_mode, v_samples, v_seed, v_tol, v_threads);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  } catch (const lamopt::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInput;
  }
  return kExitOk;
}
