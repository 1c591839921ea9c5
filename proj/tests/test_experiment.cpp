#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "spindyn/errors.hpp"
#include "spindyn/experiment.hpp"

using namespace spindyn;
namespace fs = std::filesystem;

namespace {

const char* kSmallConfig = R"(
# smoke-test experiment
rows = 1
cols = 1
shore = 4
instances = 10
master_seed = 77
repetitions = 20
bins = 20
workers = 2
output_dir = {OUT}
solvers = o3

[o3]
h = 1.0
t_f = 10.0
dt = 0.02
alpha = 0.1
kappa = 0.1
)";

ExperimentConfig config_with_output(const std::string& text, const fs::path& out) {
  std::string patched = text;
  const auto pos = patched.find("{OUT}");
  REQUIRE(pos != std::string::npos);
  patched.replace(pos, 5, out.string());
  std::istringstream in(patched);
  return ExperimentConfig::parse(in);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> snapshot_outputs(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file())
      files[fs::relative(entry.path(), dir).string()] = slurp(entry.path());
  }
  return files;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "spindyn_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing round trip and validation errors") {
  const fs::path out = fresh_dir("cfg");
  const ExperimentConfig cfg = config_with_output(kSmallConfig, out / "x");
  CHECK(cfg.rows == 1);
  CHECK(cfg.instances == 10);
  CHECK(cfg.repetitions == 20);
  CHECK(cfg.solvers == std::vector<Solver>{Solver::O3});
  CHECK(cfg.o3.alpha == 0.1);
  CHECK(cfg.o3.t_f == 10.0);

  auto parse_text = [](const std::string& text) {
    std::istringstream in(text);
    return ExperimentConfig::parse(in);
  };
  CHECK_THROWS_WITH_AS(parse_text("bogus_key = 3\n"),
                       doctest::Contains("bogus_key"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_text("instances = 1\nrepetitions = 1\noutput_dir = x\nsolvers = o3\n"
                 "[o3]\nalhpa = 0.1\n"),
      doctest::Contains("o3.alhpa"), ConfigError);
  CHECK_THROWS_AS(parse_text("instances = 1\n"), ConfigError);  // missing keys
  CHECK_THROWS_AS(
      parse_text("instances = 1\nrepetitions = 1\noutput_dir = x\nsolvers = o9\n"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_text("instances = 1\nrepetitions = 1\noutput_dir = x\nsolvers = o3,o3\n"),
      ConfigError);
}

TEST_CASE("smoke experiment produces a complete, reproducible output tree") {
  const fs::path out = fresh_dir("smoke");
  const ExperimentConfig cfg = config_with_output(kSmallConfig, out);
  const ExperimentManifest manifest = run_experiment(cfg);

  CHECK(manifest.instances.size() == 10);
  CHECK(manifest.ground_truths.size() == 10);
  REQUIRE(manifest.records.count("o3") == 1);
  CHECK(manifest.records.at("o3").size() == 10);
  for (const auto& rec : manifest.records.at("o3")) {
    CHECK(rec.repetitions == 20);
    CHECK(rec.successes >= 0);
    CHECK(rec.successes <= 20);
  }
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(fs::exists(out / "success_o3.csv"));
  CHECK(fs::exists(out / "hist_o3.csv"));
  CHECK(fs::exists(out / "instances" / "inst0000.txt"));

  // Every ground truth precedes its success records (manifest integrity).
  for (const auto& gt : manifest.ground_truths)
    CHECK(fs::exists(out / gt.cache_file));

  const auto first = snapshot_outputs(out);

  // Re-run into the same directory (cache warm) and into a fresh one with a
  // different worker count: bytes must match in both cases.
  run_experiment(cfg);
  const auto rerun = snapshot_outputs(out);
  CHECK(first == rerun);

  const fs::path out2 = fresh_dir("smoke_workers");
  ExperimentConfig cfg2 = config_with_output(kSmallConfig, out2);
  cfg2.workers = 1;
  run_experiment(cfg2);
  auto second = snapshot_outputs(out2);
  // The config snapshot embeds output_dir; ignore the manifest for the
  // cross-directory comparison.
  auto first_cmp = first;
  first_cmp.erase("manifest.json");
  second.erase("manifest.json");
  CHECK(first_cmp == second);
}

TEST_CASE("selecting two solvers yields exactly one correlation pair") {
  const fs::path out = fresh_dir("pair");
  ExperimentConfig cfg = config_with_output(kSmallConfig, out);
  cfg.solvers = {Solver::O3, Solver::O2};
  cfg.o2.t_f = 10.0;
  cfg.instances = 10;
  const ExperimentManifest manifest = run_experiment(cfg);
  REQUIRE(manifest.correlations.size() == 1);
  CHECK(manifest.correlations[0].solver_x == "o3");
  CHECK(manifest.correlations[0].solver_y == "o2");
  CHECK(manifest.correlations[0].result.n == 10);
  CHECK(fs::exists(out / "scatter_o3_o2.csv"));
  CHECK(fs::exists(out / "correlations.json"));
}

TEST_CASE("external import joins on instance ids and validates them") {
  const fs::path out = fresh_dir("import");
  const ExperimentConfig cfg = config_with_output(kSmallConfig, out);
  const ExperimentManifest manifest = run_experiment(cfg);

  // Valid import: every manifest instance named once.
  {
    std::ofstream csv(out / "external.csv");
    csv << "instance_id,solver,repetitions,successes,p_hat\n";
    int k = 0;
    for (const auto& inst : manifest.instances)
      csv << inst.id << ",external,1000," << (100 + 50 * (k++ % 10)) << ","
          << (0.1 + 0.05 * ((k - 1) % 10)) << "\n";
  }
  import_external_probabilities(out.string(), (out / "external.csv").string());
  CHECK(fs::exists(out / "success_external.csv"));
  CHECK(fs::exists(out / "hist_external.csv"));
  CHECK(fs::exists(out / "scatter_o3_external.csv"));
  const std::string correlations = slurp(out / "correlations.json");
  CHECK(correlations.find("external") != std::string::npos);

  // Unknown id is an error naming the id.
  {
    std::ofstream csv(out / "bad.csv");
    csv << "instance_id,solver,repetitions,successes,p_hat\n";
    csv << "ghost42,external,10,5,0.5\n";
    for (const auto& inst : manifest.instances)
      csv << inst.id << ",external,10,5,0.5\n";
  }
  CHECK_THROWS_WITH_AS(
      import_external_probabilities(out.string(), (out / "bad.csv").string()),
      doctest::Contains("ghost42"), ValidationError);

  // Near-empty CSV: too few rows to correlate.
  {
    std::ofstream csv(out / "empty.csv");
    csv << "instance_id,solver,repetitions,successes,p_hat\n";
    csv << manifest.instances[0].id << ",external,10,5,0.5\n";
  }
  CHECK_THROWS_AS(
      import_external_probabilities(out.string(), (out / "empty.csv").string()),
      ValidationError);

  // Malformed row reports its line number.
  {
    std::ofstream csv(out / "malformed.csv");
    csv << "instance_id,solver,repetitions,successes,p_hat\n";
    csv << manifest.instances[0].id << ",external,10,5\n";
  }
  CHECK_THROWS_WITH_AS(
      import_external_probabilities(out.string(), (out / "malformed.csv").string()),
      doctest::Contains("line 2"), ValidationError);
}

TEST_CASE("brute-force cross-check runs on small graphs") {
  // C(1,1,4) has 8 active vertices, so the sweep is cross-checked against
  // brute force inside run_experiment; reaching here means they agreed.
  const fs::path out = fresh_dir("crosscheck");
  ExperimentConfig cfg = config_with_output(kSmallConfig, out);
  cfg.instances = 6;
  CHECK_NOTHROW(run_experiment(cfg));
}
