#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spindyn/errors.hpp"
#include "spindyn/exact.hpp"
#include "spindyn/experiment.hpp"
#include "spindyn/instance.hpp"
#include "spindyn/o2.hpp"
#include "spindyn/o3.hpp"
#include "spindyn/parallel.hpp"
#include "spindyn/rng.hpp"
#include "spindyn/sa.hpp"
#include "spindyn/stats.hpp"
#include "spindyn/version.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace spindyn;

namespace {

struct ChimeraFlags {
  int rows = 4, cols = 4, shore = 4;
  std::string mask_file;

  ChimeraSpec spec() const {
    ChimeraSpec s;
    s.rows = rows;
    s.cols = cols;
    s.shore = shore;
    if (!mask_file.empty()) s.mask = read_mask_file(mask_file);
    return s;
  }
};

void add_chimera_flags(CLI::App* cmd, ChimeraFlags& flags) {
  cmd->add_option("--rows", flags.rows, "Chimera rows")->capture_default_str();
  cmd->add_option("--cols", flags.cols, "Chimera cols")->capture_default_str();
  cmd->add_option("--shore", flags.shore, "Qubits per half-cell")->capture_default_str();
  cmd->add_option("--mask", flags.mask_file,
                  "Mask file: one disabled vertex index per line");
}

ordered_json ground_truth_json(const GroundTruth& gt) {
  ordered_json j;
  j["energy"] = gt.energy;
  ordered_json w = ordered_json::array();
  for (std::int8_t s : gt.witness.sigma) w.push_back(int(s));
  j["witness"] = w;
  j["method"] = method_name(gt.method);
  return j;
}

int run_gen(const ChimeraFlags& chimera, int count, std::uint64_t seed,
            const std::string& out_dir) {
  const Graph graph = build_chimera(chimera.spec());
  fs::create_directories(out_dir);
  for (int k = 0; k < count; ++k) {
    const std::uint64_t inst_seed =
        count == 1 ? seed
                   : counter_hash(seed, std::uint64_t(Stream::InstanceSeed),
                                  std::uint64_t(k));
    std::string id = "inst" + std::to_string(k);
    if (id.size() < 8) id.insert(4, std::string(8 - id.size(), '0'));
    const Instance inst = gen_instance(graph, inst_seed, id);
    const std::string path = out_dir + "/" + id + ".txt";
    write_instance_file(inst, path);
    std::cout << path << "\n";
  }
  std::cout << "generated " << count << " instance(s) on "
            << graph.active_count() << " active vertices, "
            << graph.edges.size() << " edges\n";
  return 0;
}

int run_solve_exact(const std::string& instance_path, const std::string& method,
                    const ChimeraFlags& chimera, bool have_chimera) {
  const Instance inst = read_instance_file(instance_path);
  GroundTruth gt;
  if (method == "brute" || (method == "auto" && !have_chimera &&
                            inst.graph.active_count() <= 30)) {
    gt = brute_force_ground(inst);
  } else if (method == "dp" || have_chimera) {
    gt = chimera_dp_ground(inst, chimera.spec());
  } else {
    throw ValidationError(
        "instance too large for brute force; pass --rows/--cols/--shore "
        "(and --mask) for the chimera column sweep");
  }
  std::cout << ground_truth_json(gt).dump(2) << "\n";
  return 0;
}

int run_anneal(const std::string& instance_path, const std::string& model,
               const AnnealParamsO3& o3, const AnnealParamsO2& o2,
               const SaSchedule& sa, int repetitions, std::uint64_t seed,
               std::optional<std::int64_t> ground_energy, unsigned workers) {
  const Instance inst = read_instance_file(instance_path);
  SolverFn fn;
  if (model == "o3") {
    fn = [&](const Instance& i, std::uint64_t s) { return readout(run_o3(i, o3, s)); };
  } else if (model == "o2") {
    fn = [&](const Instance& i, std::uint64_t s) { return run_o2(i, o2, s); };
  } else if (model == "sa") {
    fn = [&](const Instance& i, std::uint64_t s) { return run_sa(i, sa, s); };
  } else {
    throw ConfigError("unknown model '" + model + "' (expected o3, o2 or sa)");
  }

  std::vector<std::int64_t> energies(static_cast<std::size_t>(repetitions));
  parallel_for(std::size_t(repetitions), workers, [&](std::size_t rep) {
    const std::uint64_t run_seed = derive_run_seed(seed, inst.id, rep);
    energies[rep] = energy(inst, fn(inst, run_seed));
  });

  ordered_json j;
  j["model"] = model;
  j["instance_id"] = inst.id;
  j["repetitions"] = repetitions;
  j["energies"] = energies;
  j["best_energy"] = *std::min_element(energies.begin(), energies.end());
  if (ground_energy) {
    int successes = 0;
    for (auto e : energies) successes += e == *ground_energy;
    j["ground_energy"] = *ground_energy;
    j["successes"] = successes;
    j["p_hat"] = double(successes) / double(repetitions);
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

std::vector<SuccessRecord> read_success_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV: " + path);
  return read_success_csv(in);
}

int run_stats_hist(const std::string& input, int bins, const std::string& output,
                   bool check_bimodality) {
  const auto records = read_success_csv_file(input);
  const Histogram h = histogram(records, bins);
  if (output.empty()) {
    write_histogram_csv(std::cout, h);
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + output);
    write_histogram_csv(out, h);
  }
  if (check_bimodality) {
    const BimodalityResult b = bimodality_flag(h);
    ordered_json j;
    j["bimodal"] = b.bimodal;
    j["low_mass"] = b.low_mass;
    j["mid_mass"] = b.mid_mass;
    j["high_mass"] = b.high_mass;
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

int run_stats_corr(const std::string& x_path, const std::string& y_path,
                   const std::string& scatter_path) {
  const auto rx = read_success_csv_file(x_path);
  const auto ry = read_success_csv_file(y_path);
  std::vector<double> xs, ys;
  std::vector<ScatterRow> rows;
  for (const auto& a : rx) {
    for (const auto& b : ry) {
      if (a.instance_id == b.instance_id) {
        xs.push_back(a.p_hat);
        ys.push_back(b.p_hat);
        rows.push_back({a.instance_id, a.p_hat, b.p_hat});
        break;
      }
    }
  }
  const CorrelationResult r = correlate(xs, ys);
  if (!scatter_path.empty()) {
    std::ofstream out(scatter_path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + scatter_path);
    write_scatter_csv(out, rows);
  }
  ordered_json j;
  j["pearson_r"] = r.pearson_r;
  j["pearson_degenerate"] = r.pearson_degenerate;
  j["spearman_rho"] = r.spearman_rho;
  j["n"] = r.n;
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kToolName) +
               " - semi-classical spin-dynamics annealers, an SA baseline, exact "
               "chimera ground states, and a success-probability experiment harness"};
  app.set_version_flag("--version",
                       std::string(kToolName) + " " + std::string(kToolVersion));
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate random +-1 spin-glass instances");
  ChimeraFlags gen_chimera;
  add_chimera_flags(gen, gen_chimera);
  int gen_count = 1;
  std::uint64_t gen_seed = 1;
  std::string gen_out = ".";
  gen->add_option("--count", gen_count, "Number of instances")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Master seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output directory")->capture_default_str();

  // solve-exact
  auto* solve = app.add_subcommand("solve-exact", "Exact ground state of an instance");
  std::string solve_instance, solve_method = "auto";
  ChimeraFlags solve_chimera;
  solve->add_option("instance", solve_instance, "Instance file")->required();
  solve->add_option("--method", solve_method, "auto, brute, or dp")
      ->check(CLI::IsMember({"auto", "brute", "dp"}))
      ->capture_default_str();
  add_chimera_flags(solve, solve_chimera);

  // anneal
  auto* anneal = app.add_subcommand("anneal", "Run an annealer on an instance");
  std::string anneal_instance, anneal_model;
  AnnealParamsO3 o3_params;
  AnnealParamsO2 o2_params;
  SaSchedule sa_schedule;
  int anneal_reps = 1;
  std::uint64_t anneal_seed = 1;
  std::int64_t anneal_ground = 0;
  unsigned anneal_workers = 0;
  anneal->add_option("instance", anneal_instance, "Instance file")->required();
  anneal->add_option("--model", anneal_model, "o3, o2 or sa")
      ->check(CLI::IsMember({"o3", "o2", "sa"}))
      ->required();
  anneal->add_option("--field", o3_params.h, "Transverse field strength h (o3/o2)")
      ->capture_default_str();
  anneal->add_option("--t-f", o3_params.t_f, "Total anneal time (o3/o2)")
      ->capture_default_str();
  auto* dt_opt = anneal->add_option("--dt", o3_params.dt,
                                    "Time step (o3 default 0.02, o2 default 0.01)");
  anneal->add_option("--alpha", o3_params.alpha, "O3 damping")->capture_default_str();
  anneal->add_option("--kappa", o3_params.kappa, "Initial kick amplitude (o3/o2)")
      ->capture_default_str();
  anneal->add_option("--gamma", o2_params.gamma, "O2 viscous damping")
      ->capture_default_str();
  anneal->add_option("--beta-start", sa_schedule.beta_start, "SA starting beta")
      ->capture_default_str();
  anneal->add_option("--beta-end", sa_schedule.beta_end, "SA final beta")
      ->capture_default_str();
  anneal->add_option("--sweeps", sa_schedule.sweeps, "SA sweeps")->capture_default_str();
  anneal->add_option("--reps", anneal_reps, "Repetitions")->capture_default_str();
  anneal->add_option("--seed", anneal_seed, "Master seed")->capture_default_str();
  auto* ground_opt = anneal->add_option("--ground-energy", anneal_ground,
                                        "Count repetitions reaching this energy");
  anneal->add_option("--workers", anneal_workers, "Worker threads (0 = all cores)")
      ->capture_default_str();

  // stats
  auto* stats = app.add_subcommand("stats", "Histogram / correlation utilities");
  stats->require_subcommand(1);
  auto* hist_cmd = stats->add_subcommand("hist", "Histogram of success probabilities");
  std::string hist_in, hist_out;
  int hist_bins = 20;
  bool hist_bimodality = false;
  hist_cmd->add_option("--input", hist_in, "Success CSV")->required();
  hist_cmd->add_option("--bins", hist_bins, "Bin count")->capture_default_str();
  hist_cmd->add_option("--output", hist_out, "Histogram CSV (default stdout)");
  hist_cmd->add_flag("--bimodality", hist_bimodality,
                     "Also print the bimodality diagnostic (20 bins only)");
  auto* corr_cmd = stats->add_subcommand("corr", "Correlate two success CSVs");
  std::string corr_x, corr_y, corr_scatter;
  corr_cmd->add_option("--x", corr_x, "First success CSV")->required();
  corr_cmd->add_option("--y", corr_y, "Second success CSV")->required();
  corr_cmd->add_option("--scatter", corr_scatter, "Write the joined scatter CSV here");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run a configured experiment");
  std::string experiment_config;
  unsigned experiment_workers = 0;
  experiment->add_option("--config", experiment_config, "Config file")->required();
  auto* workers_opt = experiment->add_option("--workers", experiment_workers,
                                             "Override the config worker count");

  // import
  auto* import_cmd = app.add_subcommand(
      "import", "Merge external success probabilities into an experiment");
  std::string import_dir, import_csv;
  import_cmd->add_option("--dir", import_dir, "Experiment output directory")->required();
  import_cmd->add_option("--csv", import_csv, "External success CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return run_gen(gen_chimera, gen_count, gen_seed, gen_out);
    if (*solve) {
      const bool have_chimera =
          solve->count("--rows") || solve->count("--cols") || solve->count("--shore") ||
          solve->count("--mask");
      return run_solve_exact(solve_instance, solve_method, solve_chimera, have_chimera);
    }
    if (*anneal) {
      o2_params.h = o3_params.h;
      o2_params.t_f = o3_params.t_f;
      o2_params.kappa = o3_params.kappa;
      if (*dt_opt) o2_params.dt = o3_params.dt;
      std::optional<std::int64_t> ground;
      if (*ground_opt) ground = anneal_ground;
      return run_anneal(anneal_instance, anneal_model, o3_params, o2_params,
                        sa_schedule, anneal_reps, anneal_seed, ground, anneal_workers);
    }
    if (*stats) {
      if (*hist_cmd) return run_stats_hist(hist_in, hist_bins, hist_out, hist_bimodality);
      if (*corr_cmd) return run_stats_corr(corr_x, corr_y, corr_scatter);
    }
    if (*experiment) {
      ExperimentConfig cfg = ExperimentConfig::parse_file(experiment_config);
      if (*workers_opt) cfg.workers = experiment_workers;
      const ExperimentManifest manifest = run_experiment(cfg);
      std::cout << "experiment complete: " << manifest.instances.size()
                << " instances, " << manifest.records.size() << " solver(s), outputs in "
                << cfg.output_dir << "\n";
      for (const auto& e : manifest.correlations) {
        std::cout << e.solver_x << " vs " << e.solver_y
                  << ": pearson_r = " << format_double(e.result.pearson_r)
                  << ", spearman_rho = " << format_double(e.result.spearman_rho)
                  << " (n = " << e.result.n << ")\n";
      }
      return 0;
    }
    if (*import_cmd) {
      import_external_probabilities(import_dir, import_csv);
      std::cout << "imported external records into " << import_dir << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
