#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "spindyn/exact.hpp"
#include "spindyn/o2.hpp"
#include "spindyn/o3.hpp"
#include "spindyn/sa.hpp"
#include "spindyn/stats.hpp"

namespace spindyn {

// Parsed from the flat key=value config format (see README). Unknown keys or
// sections are hard errors, reported with their field path.
struct ExperimentConfig {
  int rows = 4;
  int cols = 4;
  int shore = 4;
  std::string mask_file;  // optional; one vertex index per line
  int instances = 0;
  std::uint64_t master_seed = 1;
  int repetitions = 0;
  int bins = 20;
  unsigned workers = 0;  // 0 = hardware concurrency
  std::string output_dir;
  std::vector<Solver> solvers;  // subset of {o3, o2, sa}, in run order
  AnnealParamsO3 o3;
  AnnealParamsO2 o2;
  SaSchedule sa;

  static ExperimentConfig parse(std::istream& in);
  static ExperimentConfig parse_file(const std::string& path);
  void validate() const;
  ChimeraSpec chimera_spec() const;  // loads the mask file if set
};

struct ExperimentManifest {
  struct InstanceEntry {
    std::string id;
    std::string file;
    std::uint64_t seed = 0;
    std::string content_hash;
  };
  struct GroundEntry {
    std::string id;
    std::int64_t energy = 0;
    std::string method;
    std::string cache_file;
  };
  struct CorrelationEntry {
    std::string solver_x, solver_y;
    CorrelationResult result;
    std::string scatter_file;
  };

  std::string version;
  std::vector<InstanceEntry> instances;
  std::vector<GroundEntry> ground_truths;
  // solver name -> (records, csv path)
  std::map<std::string, std::vector<SuccessRecord>> records;
  std::map<std::string, std::string> record_files;
  std::map<std::string, std::string> histogram_files;
  std::vector<CorrelationEntry> correlations;
};

// Runs the full pipeline into config.output_dir: instance files, disk-cached
// ground truths (keyed by instance content hash), per-solver success CSVs and
// histograms, pairwise scatter CSVs and correlations.json, and manifest.json.
// Reruns with the same config are byte-identical at any worker count.
ExperimentManifest run_experiment(const ExperimentConfig& config);

// Merges externally measured success probabilities (same CSV schema, solver
// column "external") into an existing experiment directory and recomputes
// correlations of the external records against every simulated solver.
// Unknown instance ids and malformed rows are errors (with line numbers).
void import_external_probabilities(const std::string& experiment_dir,
                                   const std::string& csv_path);

}  // namespace spindyn
