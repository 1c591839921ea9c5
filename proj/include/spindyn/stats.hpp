#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spindyn/exact.hpp"
#include "spindyn/instance.hpp"

namespace spindyn {

enum class Solver { O3, O2, SA, External };

std::string_view solver_name(Solver s);
std::optional<Solver> parse_solver(std::string_view name);

// Estimated success probability of one solver on one instance.
struct SuccessRecord {
  std::string instance_id;
  Solver solver = Solver::External;
  int repetitions = 0;
  int successes = 0;
  double p_hat = 0.0;
};

struct Histogram {
  std::vector<double> bin_edges;        // B+1 ascending values spanning [0, 1]
  std::vector<std::int64_t> counts;     // B bins
};

// Operationalization of "two peaks at the ends": each end mass must be
// nonzero and at least `ratio` times the central mass.
struct BimodalityCriteria {
  double low_max = 0.10;
  double mid_lo = 0.45;
  double mid_hi = 0.55;
  double high_min = 0.90;
  double ratio = 2.0;
};

struct BimodalityResult {
  bool bimodal = false;
  std::int64_t low_mass = 0;
  std::int64_t mid_mass = 0;
  std::int64_t high_mass = 0;
};

struct CorrelationResult {
  double pearson_r = 0.0;
  double spearman_rho = 0.0;
  std::size_t n = 0;
  bool pearson_degenerate = false;  // constant input; r reported as 0
  std::vector<std::pair<double, double>> pairs;
};

// A solver bound to its parameters: maps (instance, seed) to a readout.
using SolverFn = std::function<SpinConfig(const Instance&, std::uint64_t)>;

// Runs `repetitions` independent anneals with seeds derived from
// (master_seed, instance id, repetition index); a repetition succeeds when
// its readout energy equals the exact ground energy. Repetitions may fan out
// over `workers` threads without changing the counts.
SuccessRecord success_probability(Solver tag, const SolverFn& solver,
                                  const Instance& inst, const GroundTruth& ground,
                                  int repetitions, std::uint64_t master_seed,
                                  unsigned workers = 1);

// Uniform bins on [0, 1]; a value of exactly 1 lands in the last bin.
Histogram histogram_of(const std::vector<double>& values, int bins);
Histogram histogram(const std::vector<SuccessRecord>& records, int bins = 20);

// Requires a 20-bin histogram (or one whose edges align with the criteria).
BimodalityResult bimodality_flag(const Histogram& hist,
                                 const BimodalityCriteria& criteria = {});

// Standard sample Pearson correlation; constant input is reported as 0 with
// *degenerate set. Spearman is Pearson on mid-ranks (ties averaged).
double pearson(const std::vector<double>& xs, const std::vector<double>& ys,
               bool* degenerate = nullptr);
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);
CorrelationResult correlate(const std::vector<double>& xs,
                            const std::vector<double>& ys);

// Hamming distance quotiented by global spin flip: min(d, N - d). The raw
// (unquotiented) count is d; callers that need the fixed-reference
// convention should say so explicitly.
int hamming_to_reference(const SpinConfig& config, const SpinConfig& reference);

// CSV schemas. Success: "instance_id,solver,repetitions,successes,p_hat".
// Histogram: "bin_lo,bin_hi,count". Scatter: "instance_id,p_x,p_y".
void write_success_csv(std::ostream& out, const std::vector<SuccessRecord>& records);
std::vector<SuccessRecord> read_success_csv(std::istream& in);
void write_histogram_csv(std::ostream& out, const Histogram& hist);
struct ScatterRow {
  std::string instance_id;
  double p_x, p_y;
};
void write_scatter_csv(std::ostream& out, const std::vector<ScatterRow>& rows);

// Shortest round-trip decimal formatting, used everywhere a double reaches a
// file so that reruns are byte-identical.
std::string format_double(double v);

}  // namespace spindyn
