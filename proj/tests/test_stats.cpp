#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "spindyn/errors.hpp"
#include "spindyn/exact.hpp"
#include "spindyn/o3.hpp"
#include "spindyn/rng.hpp"
#include "spindyn/stats.hpp"

using namespace spindyn;

namespace {

Instance two_spin(std::int8_t coupling) {
  Instance inst;
  inst.graph = Graph::from_edges(2, {{0, 1}});
  inst.couplings = {coupling};
  inst.id = "pair";
  return inst;
}

std::vector<SuccessRecord> records_of(const std::vector<double>& p) {
  std::vector<SuccessRecord> recs;
  int k = 0;
  for (double v : p) {
    SuccessRecord r;
    r.instance_id = "inst" + std::to_string(k++);
    r.solver = Solver::O3;
    r.repetitions = 1000;
    r.successes = int(std::lround(v * 1000));
    r.p_hat = v;
    recs.push_back(r);
  }
  return recs;
}

}  // namespace

TEST_CASE("histogram edge assignment: {0, 0.5, 1} with 2 bins -> (1, 2)") {
  const Histogram h = histogram_of({0.0, 0.5, 1.0}, 2);
  CHECK(h.counts == std::vector<std::int64_t>{1, 2});
  CHECK(h.bin_edges.front() == 0.0);
  CHECK(h.bin_edges.back() == 1.0);
}

TEST_CASE("histogram conserves the total count") {
  std::vector<double> values;
  const int n = 100000;
  values.reserve(n);
  for (int i = 0; i < n; ++i)
    values.push_back(rng_open01(3, Stream::SaAccept, std::uint64_t(i)));
  const Histogram h = histogram_of(values, 20);
  std::int64_t total = 0;
  for (auto c : h.counts) total += c;
  CHECK(total == n);
}

TEST_CASE("degenerate histogram: all p = 0 lands in the first bin") {
  const Histogram h = histogram_of(std::vector<double>(50, 0.0), 20);
  CHECK(h.counts[0] == 50);
  for (std::size_t b = 1; b < 20; ++b) CHECK(h.counts[b] == 0);
}

TEST_CASE("histogram rejects bad input") {
  CHECK_THROWS_AS(histogram_of({}, 20), ValidationError);
  CHECK_THROWS_AS(histogram_of({0.5}, 1), ValidationError);
  CHECK_THROWS_AS(histogram_of({1.5}, 20), ValidationError);
}

TEST_CASE("bimodality: end-concentrated histograms flag true") {
  std::vector<double> p(40, 0.02);
  p.insert(p.end(), 25, 0.97);
  p.insert(p.end(), 10, 0.5);
  const BimodalityResult res = bimodality_flag(histogram_of(p, 20));
  CHECK(res.bimodal);
  CHECK(res.low_mass == 40);
  CHECK(res.high_mass == 25);
  CHECK(res.mid_mass == 10);
}

TEST_CASE("bimodality: uniform counts flag false") {
  std::vector<double> p;
  for (int b = 0; b < 20; ++b) p.insert(p.end(), 5, (b + 0.5) / 20.0);
  CHECK_FALSE(bimodality_flag(histogram_of(p, 20)).bimodal);
}

TEST_CASE("bimodality: a single central peak flags false") {
  std::vector<double> p(100, 0.5);
  p.push_back(0.45);
  p.push_back(0.55);
  const BimodalityResult res = bimodality_flag(histogram_of(p, 20));
  CHECK_FALSE(res.bimodal);
  CHECK(res.low_mass == 0);
  CHECK(res.high_mass == 0);
}

TEST_CASE("bimodality requires 20 bins") {
  CHECK_THROWS_AS(bimodality_flag(histogram_of({0.1, 0.9, 0.5}, 10)), ValidationError);
}

TEST_CASE("pearson and spearman on the tabulated examples") {
  CHECK(pearson({1, 2, 3}, {1, 2, 3}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spearman({1, 2, 3}, {1, 2, 3}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pearson({1, 2, 3}, {3, 2, 1}) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(spearman({1, 2, 3}, {3, 2, 1}) == doctest::Approx(-1.0).epsilon(1e-12));
  // Ranks of (1, 3, 2, 4) against (1, 2, 3, 4): Pearson = 4/5.
  CHECK(spearman({1, 2, 3, 4}, {1, 3, 2, 4}) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("pearson flags constant input and reports 0") {
  bool degenerate = false;
  CHECK(pearson({1, 1, 1}, {1, 2, 3}, &degenerate) == 0.0);
  CHECK(degenerate);
}

TEST_CASE("correlation input validation") {
  CHECK_THROWS_AS(pearson({1, 2}, {1, 2}), ValidationError);
  CHECK_THROWS_AS(pearson({1, 2, 3}, {1, 2}), ValidationError);
  CHECK_THROWS_AS(spearman({1, 2}, {1, 2}), ValidationError);
}

TEST_CASE("spearman is invariant under strictly monotone transforms") {
  std::vector<double> xs, ys;
  for (int i = 0; i < 40; ++i) {
    xs.push_back(rng_open01(5, Stream::SaAccept, std::uint64_t(i)));
    ys.push_back(rng_open01(6, Stream::SaAccept, std::uint64_t(i)));
  }
  const double base = spearman(xs, ys);
  std::vector<double> cubed = xs;
  for (double& v : cubed) v = v * v * v + 2.0;
  CHECK(spearman(cubed, ys) == doctest::Approx(base).epsilon(1e-12));
  std::vector<double> exped = ys;
  for (double& v : exped) v = std::exp(3.0 * v);
  CHECK(spearman(xs, exped) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("pearson is invariant under positive affine transforms") {
  std::vector<double> xs, ys;
  for (int i = 0; i < 40; ++i) {
    xs.push_back(rng_open01(7, Stream::SaAccept, std::uint64_t(i)));
    ys.push_back(rng_open01(8, Stream::SaAccept, std::uint64_t(i)));
  }
  const double base = pearson(xs, ys);
  std::vector<double> mapped = xs;
  for (double& v : mapped) v = 2.5 * v + 7.0;
  CHECK(pearson(mapped, ys) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("hamming distance quotients the global flip") {
  SpinConfig a, b;
  a.sigma = {1, 1, -1, 1, -1, 1, 1, 1};
  b = a;
  CHECK(hamming_to_reference(a, b) == 0);
  for (auto& s : b.sigma) s = std::int8_t(-s);
  CHECK(hamming_to_reference(a, b) == 0);
  b = a;
  b.sigma[3] = -1;
  CHECK(hamming_to_reference(a, b) == 1);
  SpinConfig c;
  c.sigma = {1, 1};
  CHECK_THROWS_AS(hamming_to_reference(a, c), ValidationError);
}

TEST_CASE("success probability with stub solvers") {
  const Instance inst = two_spin(-1);
  const GroundTruth gt = brute_force_ground(inst);

  const SolverFn witness_stub = [&](const Instance&, std::uint64_t) {
    return gt.witness;
  };
  const SuccessRecord always = success_probability(Solver::SA, witness_stub, inst,
                                                   gt, 50, 1);
  CHECK(always.successes == 50);
  CHECK(always.p_hat == 1.0);

  const SolverFn flipped_stub = [&](const Instance&, std::uint64_t) {
    SpinConfig cfg = gt.witness;
    for (auto& s : cfg.sigma) s = std::int8_t(-s);
    return cfg;
  };
  const SuccessRecord flipped = success_probability(Solver::SA, flipped_stub, inst,
                                                    gt, 50, 1);
  CHECK(flipped.p_hat == 1.0);  // success is energy-based, not state-based

  const SolverFn wrong_stub = [&](const Instance&, std::uint64_t) {
    SpinConfig cfg = gt.witness;
    cfg.sigma[0] = std::int8_t(-cfg.sigma[0]);
    return cfg;
  };
  CHECK(success_probability(Solver::SA, wrong_stub, inst, gt, 50, 1).p_hat == 0.0);
}

TEST_CASE("success probability of the damped O3 annealer on the easy pair") {
  const Instance inst = two_spin(-1);
  const GroundTruth gt = brute_force_ground(inst);
  AnnealParamsO3 params;
  params.alpha = 0.1;
  const SolverFn o3 = [&](const Instance& i, std::uint64_t seed) {
    return readout(run_o3(i, params, seed));
  };
  const SuccessRecord rec = success_probability(Solver::O3, o3, inst, gt, 100, 7);
  CHECK(rec.p_hat >= 0.99);
}

TEST_CASE("success probability is independent of the worker count") {
  const Instance inst = two_spin(1);
  const GroundTruth gt = brute_force_ground(inst);
  AnnealParamsO3 params;
  params.t_f = 10.0;  // keep it quick; determinism is what matters here
  const SolverFn o3 = [&](const Instance& i, std::uint64_t seed) {
    return readout(run_o3(i, params, seed));
  };
  const SuccessRecord serial = success_probability(Solver::O3, o3, inst, gt, 64, 3, 1);
  const SuccessRecord parallel = success_probability(Solver::O3, o3, inst, gt, 64, 3, 4);
  CHECK(serial.successes == parallel.successes);
}

TEST_CASE("success probability validates its ground truth") {
  const Instance inst = two_spin(-1);
  GroundTruth wrong = brute_force_ground(inst);
  wrong.energy += 2;
  const SolverFn stub = [&](const Instance&, std::uint64_t) { return wrong.witness; };
  CHECK_THROWS_AS(success_probability(Solver::SA, stub, inst, wrong, 10, 1),
                  ValidationError);
}

TEST_CASE("success CSV round trip and validation") {
  const std::vector<SuccessRecord> recs = records_of({0.0, 0.25, 1.0});
  std::stringstream ss;
  write_success_csv(ss, recs);
  const auto back = read_success_csv(ss);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].instance_id == recs[i].instance_id);
    CHECK(back[i].successes == recs[i].successes);
    CHECK(back[i].p_hat == recs[i].p_hat);
  }

  std::istringstream bad1("instance_id,solver,repetitions,successes,p_hat\nx,o3,10,11,1.1\n");
  CHECK_THROWS_WITH_AS(read_success_csv(bad1),
                       doctest::Contains("line 2"), ValidationError);
  std::istringstream bad2("x,o3,10,5\n");
  CHECK_THROWS_AS(read_success_csv(bad2), ValidationError);
  std::istringstream bad3("x,o9,10,5,0.5\n");
  CHECK_THROWS_AS(read_success_csv(bad3), ValidationError);
  std::istringstream bad4("x,o3,10,5,0.7\n");  // p_hat != successes/repetitions
  CHECK_THROWS_AS(read_success_csv(bad4), ValidationError);
}

TEST_CASE("solver names round-trip") {
  for (Solver s : {Solver::O3, Solver::O2, Solver::SA, Solver::External})
    CHECK(parse_solver(solver_name(s)) == s);
  CHECK_FALSE(parse_solver("bogus").has_value());
}
