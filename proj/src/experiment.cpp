#include "spindyn/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spindyn/errors.hpp"
#include "spindyn/parallel.hpp"
#include "spindyn/rng.hpp"
#include "spindyn/version.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace spindyn {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

struct ConfigKey {
  std::string path;  // "repetitions" or "o3.alpha"
  std::string value;
  int line;
};

double parse_double_value(const ConfigKey& k) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(k.value, &pos);
    if (pos != k.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + k.path + "' (line " +
                      std::to_string(k.line) + ")");
  }
}

long long parse_int_value(const ConfigKey& k) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(k.value, &pos);
    if (pos != k.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for '" + k.path + "' (line " +
                      std::to_string(k.line) + ")");
  }
}

std::uint64_t parse_u64_value(const ConfigKey& k) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(k.value, &pos);
    if (pos != k.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad unsigned value for '" + k.path + "' (line " +
                      std::to_string(k.line) + ")");
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
  ExperimentConfig cfg;
  std::string section;
  std::string line;
  int line_no = 0;
  bool instances_set = false, repetitions_set = false, output_set = false,
       solvers_set = false;

  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: malformed section header (line " +
                          std::to_string(line_no) + ")");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "o3" && section != "o2" && section != "sa")
        throw ConfigError("config: unknown section '[" + section + "]' (line " +
                          std::to_string(line_no) + ")");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected 'key = value' (line " +
                        std::to_string(line_no) + ")");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string path = section.empty() ? key : section + "." + key;
    if (key.empty() || value.empty())
      throw ConfigError("config: empty key or value for '" + path + "' (line " +
                        std::to_string(line_no) + ")");
    const ConfigKey ck{path, value, line_no};

    if (section.empty()) {
      if (key == "rows") cfg.rows = int(parse_int_value(ck));
      else if (key == "cols") cfg.cols = int(parse_int_value(ck));
      else if (key == "shore") cfg.shore = int(parse_int_value(ck));
      else if (key == "mask_file") cfg.mask_file = value;
      else if (key == "instances") { cfg.instances = int(parse_int_value(ck)); instances_set = true; }
      else if (key == "master_seed") cfg.master_seed = parse_u64_value(ck);
      else if (key == "repetitions") { cfg.repetitions = int(parse_int_value(ck)); repetitions_set = true; }
      else if (key == "bins") cfg.bins = int(parse_int_value(ck));
      else if (key == "workers") cfg.workers = unsigned(parse_int_value(ck));
      else if (key == "output_dir") { cfg.output_dir = value; output_set = true; }
      else if (key == "solvers") {
        solvers_set = true;
        cfg.solvers.clear();
        std::istringstream ss(value);
        std::string name;
        while (std::getline(ss, name, ',')) {
          name = trim(name);
          if (name.empty()) continue;
          const auto s = parse_solver(name);
          if (!s || *s == Solver::External)
            throw ConfigError("config: unknown solver '" + name + "' in 'solvers' (line " +
                              std::to_string(line_no) + ")");
          if (std::find(cfg.solvers.begin(), cfg.solvers.end(), *s) != cfg.solvers.end())
            throw ConfigError("config: duplicate solver '" + name + "' (line " +
                              std::to_string(line_no) + ")");
          cfg.solvers.push_back(*s);
        }
      } else {
        throw ConfigError("config: unknown key '" + path + "' (line " +
                          std::to_string(line_no) + ")");
      }
    } else if (section == "o3") {
      if (key == "h") cfg.o3.h = parse_double_value(ck);
      else if (key == "t_f") cfg.o3.t_f = parse_double_value(ck);
      else if (key == "dt") cfg.o3.dt = parse_double_value(ck);
      else if (key == "alpha") cfg.o3.alpha = parse_double_value(ck);
      else if (key == "kappa") cfg.o3.kappa = parse_double_value(ck);
      else throw ConfigError("config: unknown key '" + path + "' (line " +
                             std::to_string(line_no) + ")");
    } else if (section == "o2") {
      if (key == "h") cfg.o2.h = parse_double_value(ck);
      else if (key == "t_f") cfg.o2.t_f = parse_double_value(ck);
      else if (key == "dt") cfg.o2.dt = parse_double_value(ck);
      else if (key == "gamma") cfg.o2.gamma = parse_double_value(ck);
      else if (key == "kappa") cfg.o2.kappa = parse_double_value(ck);
      else throw ConfigError("config: unknown key '" + path + "' (line " +
                             std::to_string(line_no) + ")");
    } else {  // sa
      if (key == "beta_start") cfg.sa.beta_start = parse_double_value(ck);
      else if (key == "beta_end") cfg.sa.beta_end = parse_double_value(ck);
      else if (key == "sweeps") cfg.sa.sweeps = int(parse_int_value(ck));
      else throw ConfigError("config: unknown key '" + path + "' (line " +
                             std::to_string(line_no) + ")");
    }
  }

  if (!instances_set) throw ConfigError("config: missing required key 'instances'");
  if (!repetitions_set) throw ConfigError("config: missing required key 'repetitions'");
  if (!output_set) throw ConfigError("config: missing required key 'output_dir'");
  if (!solvers_set || cfg.solvers.empty())
    throw ConfigError("config: missing or empty 'solvers'");
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  return parse(in);
}

void ExperimentConfig::validate() const {
  chimera_spec().validate();
  if (instances < 1) throw ConfigError("config: 'instances' must be >= 1");
  if (repetitions < 1) throw ConfigError("config: 'repetitions' must be >= 1");
  if (bins < 2) throw ConfigError("config: 'bins' must be >= 2");
  if (output_dir.empty()) throw ConfigError("config: 'output_dir' must not be empty");
  for (Solver s : solvers) {
    switch (s) {
      case Solver::O3: o3.validate(); break;
      case Solver::O2: o2.validate(); break;
      case Solver::SA: sa.validate(); break;
      case Solver::External: break;
    }
  }
}

ChimeraSpec ExperimentConfig::chimera_spec() const {
  ChimeraSpec spec;
  spec.rows = rows;
  spec.cols = cols;
  spec.shore = shore;
  if (!mask_file.empty()) spec.mask = read_mask_file(mask_file);
  return spec;
}

namespace {

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[std::size_t(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

std::string instance_label(int index, int total) {
  int width = 4;
  while (total > 10000 * (width - 3)) ++width;  // widen past inst9999
  std::string digits = std::to_string(index);
  if (int(digits.size()) < width)
    digits.insert(digits.begin(), std::size_t(width) - digits.size(), '0');
  return "inst" + digits;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

ordered_json config_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["rows"] = cfg.rows;
  j["cols"] = cfg.cols;
  j["shore"] = cfg.shore;
  j["mask_file"] = cfg.mask_file;
  j["instances"] = cfg.instances;
  j["master_seed"] = cfg.master_seed;
  j["repetitions"] = cfg.repetitions;
  j["bins"] = cfg.bins;
  j["output_dir"] = cfg.output_dir;
  ordered_json solvers = ordered_json::array();
  for (Solver s : cfg.solvers) solvers.push_back(std::string(solver_name(s)));
  j["solvers"] = solvers;
  for (Solver s : cfg.solvers) {
    if (s == Solver::O3) {
      j["o3"] = {{"h", cfg.o3.h}, {"t_f", cfg.o3.t_f}, {"dt", cfg.o3.dt},
                 {"alpha", cfg.o3.alpha}, {"kappa", cfg.o3.kappa}};
    } else if (s == Solver::O2) {
      j["o2"] = {{"h", cfg.o2.h}, {"t_f", cfg.o2.t_f}, {"dt", cfg.o2.dt},
                 {"gamma", cfg.o2.gamma}, {"kappa", cfg.o2.kappa}};
    } else if (s == Solver::SA) {
      j["sa"] = {{"beta_start", cfg.sa.beta_start}, {"beta_end", cfg.sa.beta_end},
                 {"sweeps", cfg.sa.sweeps}};
    }
  }
  return j;
}

ordered_json correlation_json(const ExperimentManifest::CorrelationEntry& e) {
  ordered_json j;
  j["solver_x"] = e.solver_x;
  j["solver_y"] = e.solver_y;
  j["pearson_r"] = e.result.pearson_r;
  j["pearson_degenerate"] = e.result.pearson_degenerate;
  j["spearman_rho"] = e.result.spearman_rho;
  j["n"] = e.result.n;
  j["scatter_file"] = e.scatter_file;
  return j;
}

GroundTruth load_or_solve_ground(const Instance& inst, const ChimeraSpec& spec,
                                 const fs::path& cache_file) {
  if (fs::exists(cache_file)) {
    std::ifstream in(cache_file);
    ordered_json j;
    in >> j;
    GroundTruth gt;
    gt.energy = j.at("energy").get<std::int64_t>();
    gt.method = j.at("method").get<std::string>() == "BruteForce"
                    ? GroundTruth::Method::BruteForce
                    : GroundTruth::Method::ChimeraDP;
    for (int v : j.at("witness").get<std::vector<int>>())
      gt.witness.sigma.push_back(std::int8_t(v));
    if (energy(inst, gt.witness) != gt.energy)
      throw ValidationError("ground-truth cache is inconsistent with instance '" +
                            inst.id + "': " + cache_file.string());
    return gt;
  }
  GroundTruth gt = chimera_dp_ground(inst, spec);
  ordered_json j;
  j["energy"] = gt.energy;
  j["method"] = method_name(gt.method);
  ordered_json w = ordered_json::array();
  for (std::int8_t s : gt.witness.sigma) w.push_back(int(s));
  j["witness"] = w;
  write_text_file(cache_file, j.dump(2) + "\n");
  return gt;
}

SolverFn make_solver_fn(const ExperimentConfig& cfg, Solver s) {
  switch (s) {
    case Solver::O3:
      return [params = cfg.o3](const Instance& inst, std::uint64_t seed) {
        return readout(run_o3(inst, params, seed));
      };
    case Solver::O2:
      return [params = cfg.o2](const Instance& inst, std::uint64_t seed) {
        return run_o2(inst, params, seed);
      };
    case Solver::SA:
      return [schedule = cfg.sa](const Instance& inst, std::uint64_t seed) {
        return run_sa(inst, schedule, seed);
      };
    case Solver::External: break;
  }
  throw ValidationError("no solver function for 'external'");
}

std::string csv_string(const std::vector<SuccessRecord>& records) {
  std::ostringstream ss;
  write_success_csv(ss, records);
  return ss.str();
}

ExperimentManifest::CorrelationEntry make_correlation(
    const std::string& name_x, const std::vector<SuccessRecord>& rx,
    const std::string& name_y, const std::vector<SuccessRecord>& ry,
    const fs::path& out_dir) {
  // Records are joined on instance_id; both sides come out of the same
  // pipeline, so ids align by construction, but join defensively anyway.
  std::vector<double> xs, ys;
  std::vector<ScatterRow> rows;
  for (const auto& a : rx) {
    const auto it = std::find_if(ry.begin(), ry.end(), [&](const SuccessRecord& b) {
      return b.instance_id == a.instance_id;
    });
    if (it == ry.end()) continue;
    xs.push_back(a.p_hat);
    ys.push_back(it->p_hat);
    rows.push_back({a.instance_id, a.p_hat, it->p_hat});
  }
  ExperimentManifest::CorrelationEntry entry;
  entry.solver_x = name_x;
  entry.solver_y = name_y;
  entry.result = correlate(xs, ys);
  entry.result.pairs.clear();  // pairs live in the scatter CSV
  const std::string scatter_name = "scatter_" + name_x + "_" + name_y + ".csv";
  std::ostringstream ss;
  write_scatter_csv(ss, rows);
  write_text_file(out_dir / scatter_name, ss.str());
  entry.scatter_file = scatter_name;
  return entry;
}

void write_manifest(const fs::path& dir, const ordered_json& manifest) {
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

ExperimentManifest run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const ChimeraSpec spec = cfg.chimera_spec();
  const unsigned workers = cfg.workers == 0 ? default_workers() : cfg.workers;

  const fs::path out_dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(out_dir / "instances", ec);
  fs::create_directories(out_dir / "ground_truth", ec);
  if (!fs::is_directory(out_dir / "instances") || !fs::is_directory(out_dir / "ground_truth"))
    throw IoError("cannot create output directory: " + out_dir.string());

  const Graph graph = build_chimera(spec);
  ExperimentManifest manifest;
  manifest.version = std::string(kToolName) + " " + std::string(kToolVersion);

  // Instances.
  std::vector<Instance> instances(std::size_t(cfg.instances));
  for (int k = 0; k < cfg.instances; ++k) {
    const std::uint64_t inst_seed =
        counter_hash(cfg.master_seed, std::uint64_t(Stream::InstanceSeed), std::uint64_t(k));
    const std::string id = instance_label(k, cfg.instances);
    instances[std::size_t(k)] = gen_instance(graph, inst_seed, id);
    const std::string text = instance_text(instances[std::size_t(k)]);
    const std::string file = "instances/" + id + ".txt";
    write_text_file(out_dir / file, text);
    manifest.instances.push_back({id, file, inst_seed, hex64(fnv1a64(text))});
  }

  // Ground truths (disk-cached by content hash), before any success records.
  std::vector<GroundTruth> grounds(instances.size());
  parallel_for(instances.size(), workers, [&](std::size_t k) {
    const fs::path cache =
        out_dir / "ground_truth" / (manifest.instances[k].content_hash + ".json");
    grounds[k] = load_or_solve_ground(instances[k], spec, cache);
  });
  for (std::size_t k = 0; k < instances.size(); ++k) {
    manifest.ground_truths.push_back(
        {instances[k].id, grounds[k].energy, method_name(grounds[k].method),
         "ground_truth/" + manifest.instances[k].content_hash + ".json"});
  }

  // Cross-check the column sweep against brute force where brute force is
  // feasible.
  if (graph.active_count() <= 30) {
    const std::size_t sample = std::min<std::size_t>(5, instances.size());
    for (std::size_t k = 0; k < sample; ++k) {
      const GroundTruth bf = brute_force_ground(instances[k]);
      if (bf.energy != grounds[k].energy)
        throw std::logic_error("oracle failure: brute force and column sweep disagree on '" +
                               instances[k].id + "'");
    }
  }

  // Success records per solver, fanned out over (instance, repetition).
  for (Solver s : cfg.solvers) {
    const SolverFn fn = make_solver_fn(cfg, s);
    const std::size_t reps = std::size_t(cfg.repetitions);
    std::vector<char> ok(instances.size() * reps, 0);
    parallel_for(instances.size() * reps, workers, [&](std::size_t task) {
      const std::size_t k = task / reps;
      const std::size_t rep = task % reps;
      const std::uint64_t run_seed =
          derive_run_seed(cfg.master_seed, instances[k].id, rep);
      const SpinConfig readout_cfg = fn(instances[k], run_seed);
      ok[task] = energy(instances[k], readout_cfg) == grounds[k].energy;
    });
    std::vector<SuccessRecord> records;
    records.reserve(instances.size());
    for (std::size_t k = 0; k < instances.size(); ++k) {
      SuccessRecord rec;
      rec.instance_id = instances[k].id;
      rec.solver = s;
      rec.repetitions = cfg.repetitions;
      rec.successes = 0;
      for (std::size_t rep = 0; rep < reps; ++rep) rec.successes += ok[k * reps + rep];
      rec.p_hat = double(rec.successes) / double(cfg.repetitions);
      records.push_back(std::move(rec));
    }
    const std::string name(solver_name(s));
    const std::string csv_name = "success_" + name + ".csv";
    write_text_file(out_dir / csv_name, csv_string(records));
    manifest.record_files[name] = csv_name;

    std::ostringstream hist_ss;
    write_histogram_csv(hist_ss, histogram(records, cfg.bins));
    const std::string hist_name = "hist_" + name + ".csv";
    write_text_file(out_dir / hist_name, hist_ss.str());
    manifest.histogram_files[name] = hist_name;

    manifest.records[name] = std::move(records);
  }

  // Pairwise correlations across the selected solvers.
  for (std::size_t a = 0; a < cfg.solvers.size(); ++a) {
    for (std::size_t b = a + 1; b < cfg.solvers.size(); ++b) {
      const std::string nx(solver_name(cfg.solvers[a]));
      const std::string ny(solver_name(cfg.solvers[b]));
      manifest.correlations.push_back(
          make_correlation(nx, manifest.records.at(nx), ny, manifest.records.at(ny), out_dir));
    }
  }
  ordered_json correlations = ordered_json::array();
  for (const auto& e : manifest.correlations) correlations.push_back(correlation_json(e));
  write_text_file(out_dir / "correlations.json", correlations.dump(2) + "\n");

  // Manifest.
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["config"] = config_json(cfg);
  ordered_json inst_list = ordered_json::array();
  for (const auto& e : manifest.instances) {
    inst_list.push_back({{"id", e.id}, {"file", e.file}, {"seed", e.seed},
                         {"content_hash", e.content_hash}});
  }
  j["instances"] = inst_list;
  ordered_json gt_list = ordered_json::array();
  for (const auto& e : manifest.ground_truths) {
    gt_list.push_back({{"id", e.id}, {"energy", e.energy}, {"method", e.method},
                       {"cache_file", e.cache_file}});
  }
  j["ground_truths"] = gt_list;
  j["records"] = manifest.record_files;
  j["histograms"] = manifest.histogram_files;
  j["correlations_file"] = "correlations.json";
  write_manifest(out_dir, j);
  return manifest;
}

void import_external_probabilities(const std::string& experiment_dir,
                                   const std::string& csv_path) {
  const fs::path dir(experiment_dir);
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path))
    throw IoError("no manifest.json in " + experiment_dir);
  ordered_json manifest;
  {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot open " + manifest_path.string());
    in >> manifest;
  }

  std::vector<std::string> known_ids;
  for (const auto& e : manifest.at("instances"))
    known_ids.push_back(e.at("id").get<std::string>());

  std::ifstream csv(csv_path);
  if (!csv) throw IoError("cannot open CSV: " + csv_path);
  std::vector<SuccessRecord> external = read_success_csv(csv);
  for (auto& rec : external) {
    if (std::find(known_ids.begin(), known_ids.end(), rec.instance_id) == known_ids.end())
      throw ValidationError("import: unknown instance_id '" + rec.instance_id + "'");
    rec.solver = Solver::External;
  }
  // Canonical order: manifest instance order.
  std::vector<SuccessRecord> ordered;
  for (const auto& id : known_ids) {
    for (const auto& rec : external)
      if (rec.instance_id == id) ordered.push_back(rec);
  }

  write_text_file(dir / "success_external.csv", csv_string(ordered));
  std::vector<double> p_ext;
  for (const auto& r : ordered) p_ext.push_back(r.p_hat);
  {
    std::ostringstream hist_ss;
    write_histogram_csv(hist_ss, histogram_of(p_ext, manifest.at("config").at("bins").get<int>()));
    write_text_file(dir / "hist_external.csv", hist_ss.str());
  }

  // Correlate the external records against every simulated solver.
  ordered_json correlations = ordered_json::array();
  {
    std::ifstream in(dir / "correlations.json");
    if (in) in >> correlations;
  }
  // Drop stale external entries so re-imports are idempotent.
  ordered_json kept = ordered_json::array();
  for (const auto& e : correlations) {
    if (e.at("solver_x") != "external" && e.at("solver_y") != "external")
      kept.push_back(e);
  }
  correlations = std::move(kept);

  for (const auto& [name, csv_file] : manifest.at("records").items()) {
    if (name == "external") continue;
    std::ifstream rec_in(dir / csv_file.get<std::string>());
    if (!rec_in) throw IoError("cannot open " + (dir / csv_file.get<std::string>()).string());
    const std::vector<SuccessRecord> sim = read_success_csv(rec_in);
    ExperimentManifest::CorrelationEntry entry =
        make_correlation(name, sim, "external", ordered, dir);
    correlations.push_back(correlation_json(entry));
  }
  write_text_file(dir / "correlations.json", correlations.dump(2) + "\n");

  manifest["records"]["external"] = "success_external.csv";
  manifest["histograms"]["external"] = "hist_external.csv";
  write_manifest(dir, manifest);
}

}  // namespace spindyn
