#include "spindyn/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "spindyn/errors.hpp"
#include "spindyn/parallel.hpp"
#include "spindyn/rng.hpp"

namespace spindyn {

std::string_view solver_name(Solver s) {
  switch (s) {
    case Solver::O3: return "o3";
    case Solver::O2: return "o2";
    case Solver::SA: return "sa";
    case Solver::External: return "external";
  }
  return "unknown";
}

std::optional<Solver> parse_solver(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  if (lower == "o3") return Solver::O3;
  if (lower == "o2") return Solver::O2;
  if (lower == "sa") return Solver::SA;
  if (lower == "external") return Solver::External;
  return std::nullopt;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

SuccessRecord success_probability(Solver tag, const SolverFn& solver,
                                  const Instance& inst, const GroundTruth& ground,
                                  int repetitions, std::uint64_t master_seed,
                                  unsigned workers) {
  if (repetitions < 1)
    throw ValidationError("success_probability: repetitions must be >= 1");
  if (energy(inst, ground.witness) != ground.energy)
    throw ValidationError("success_probability: ground truth does not match instance '" +
                          inst.id + "'");
  std::vector<char> ok(std::size_t(repetitions), 0);
  parallel_for(std::size_t(repetitions), workers, [&](std::size_t rep) {
    const std::uint64_t run_seed = derive_run_seed(master_seed, inst.id, rep);
    const SpinConfig cfg = solver(inst, run_seed);
    ok[rep] = energy(inst, cfg) == ground.energy;
  });
  SuccessRecord rec;
  rec.instance_id = inst.id;
  rec.solver = tag;
  rec.repetitions = repetitions;
  rec.successes = int(std::count(ok.begin(), ok.end(), char(1)));
  rec.p_hat = double(rec.successes) / double(repetitions);
  return rec;
}

Histogram histogram_of(const std::vector<double>& values, int bins) {
  if (bins < 2) throw ValidationError("histogram: need at least 2 bins");
  if (values.empty()) throw ValidationError("histogram: empty record list");
  Histogram h;
  h.bin_edges.resize(std::size_t(bins) + 1);
  for (int b = 0; b <= bins; ++b)
    h.bin_edges[std::size_t(b)] = double(b) / double(bins);
  h.counts.assign(std::size_t(bins), 0);
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0))
      throw ValidationError("histogram: value " + format_double(v) +
                            " outside [0, 1]");
    const int idx = std::min(bins - 1, int(std::floor(v * bins)));
    ++h.counts[std::size_t(idx)];
  }
  return h;
}

Histogram histogram(const std::vector<SuccessRecord>& records, int bins) {
  std::vector<double> p;
  p.reserve(records.size());
  for (const auto& r : records) p.push_back(r.p_hat);
  return histogram_of(p, bins);
}

BimodalityResult bimodality_flag(const Histogram& hist,
                                 const BimodalityCriteria& criteria) {
  const std::size_t bins = hist.counts.size();
  if (bins != 20)
    throw ValidationError("bimodality_flag: expected a 20-bin histogram, got " +
                          std::to_string(bins) + " bins");
  constexpr double eps = 1e-12;
  BimodalityResult res;
  for (std::size_t b = 0; b < bins; ++b) {
    const double lo = hist.bin_edges[b];
    const double hi = hist.bin_edges[b + 1];
    if (hi <= criteria.low_max + eps) res.low_mass += hist.counts[b];
    if (lo >= criteria.mid_lo - eps && hi <= criteria.mid_hi + eps)
      res.mid_mass += hist.counts[b];
    if (lo >= criteria.high_min - eps) res.high_mass += hist.counts[b];
  }
  res.bimodal = res.low_mass > 0 && res.high_mass > 0 &&
                double(res.low_mass) >= criteria.ratio * double(res.mid_mass) &&
                double(res.high_mass) >= criteria.ratio * double(res.mid_mass);
  return res;
}

namespace {

void check_pair_lengths(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw ValidationError("correlation: input length mismatch (" +
                          std::to_string(xs.size()) + " vs " +
                          std::to_string(ys.size()) + ")");
  if (xs.size() < 3)
    throw ValidationError("correlation: need at least 3 samples, got " +
                          std::to_string(xs.size()));
}

// Mid-ranks: ties share the average of the ranks they span.
std::vector<double> mid_ranks(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t(0));
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double rank = 0.5 * (double(i) + double(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double pearson(const std::vector<double>& xs, const std::vector<double>& ys,
               bool* degenerate) {
  check_pair_lengths(xs, ys);
  const double n = double(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (degenerate) *degenerate = false;
  if (sxx == 0.0 || syy == 0.0) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  check_pair_lengths(xs, ys);
  return pearson(mid_ranks(xs), mid_ranks(ys));
}

CorrelationResult correlate(const std::vector<double>& xs,
                            const std::vector<double>& ys) {
  CorrelationResult res;
  res.pearson_r = pearson(xs, ys, &res.pearson_degenerate);
  res.spearman_rho = spearman(xs, ys);
  res.n = xs.size();
  res.pairs.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) res.pairs.emplace_back(xs[i], ys[i]);
  return res;
}

int hamming_to_reference(const SpinConfig& config, const SpinConfig& reference) {
  if (config.size() != reference.size())
    throw ValidationError("hamming_to_reference: length mismatch");
  int d = 0;
  for (std::size_t i = 0; i < config.size(); ++i)
    d += config.sigma[i] != reference.sigma[i];
  return std::min(d, int(config.size()) - d);
}

void write_success_csv(std::ostream& out, const std::vector<SuccessRecord>& records) {
  out << "instance_id,solver,repetitions,successes,p_hat\n";
  for (const auto& r : records) {
    out << r.instance_id << ',' << solver_name(r.solver) << ',' << r.repetitions
        << ',' << r.successes << ',' << format_double(r.p_hat) << "\n";
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::vector<SuccessRecord> read_success_csv(std::istream& in) {
  std::vector<SuccessRecord> records;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() == 5 && fields[0] == "instance_id") continue;  // header row
    }
    auto fail = [&](const std::string& what) -> ValidationError {
      return ValidationError("success CSV, line " + std::to_string(line_no) + ": " + what);
    };
    if (fields.size() != 5) throw fail("expected 5 fields, got " + std::to_string(fields.size()));
    SuccessRecord rec;
    rec.instance_id = fields[0];
    if (rec.instance_id.empty()) throw fail("empty instance_id");
    const auto solver = parse_solver(fields[1]);
    if (!solver) throw fail("unknown solver '" + fields[1] + "'");
    rec.solver = *solver;
    try {
      rec.repetitions = std::stoi(fields[2]);
      rec.successes = std::stoi(fields[3]);
      rec.p_hat = std::stod(fields[4]);
    } catch (const std::exception&) {
      throw fail("malformed numeric field");
    }
    if (rec.repetitions < 1) throw fail("repetitions must be >= 1");
    if (rec.successes < 0 || rec.successes > rec.repetitions)
      throw fail("successes outside [0, repetitions]");
    const double expected = double(rec.successes) / double(rec.repetitions);
    if (std::abs(rec.p_hat - expected) > 1e-9)
      throw fail("p_hat does not equal successes / repetitions");
    rec.p_hat = expected;
    records.push_back(std::move(rec));
  }
  return records;
}

void write_histogram_csv(std::ostream& out, const Histogram& hist) {
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t b = 0; b < hist.counts.size(); ++b) {
    out << format_double(hist.bin_edges[b]) << ',' << format_double(hist.bin_edges[b + 1])
        << ',' << hist.counts[b] << "\n";
  }
}

void write_scatter_csv(std::ostream& out, const std::vector<ScatterRow>& rows) {
  out << "instance_id,p_x,p_y\n";
  for (const auto& r : rows)
    out << r.instance_id << ',' << format_double(r.p_x) << ',' << format_double(r.p_y)
        << "\n";
}

}  // namespace spindyn
