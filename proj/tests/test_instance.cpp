#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "spindyn/errors.hpp"
#include "spindyn/instance.hpp"
#include "spindyn/rng.hpp"

using namespace spindyn;

namespace {

Instance two_spin(std::int8_t coupling) {
  Instance inst;
  inst.graph = Graph::from_edges(2, {{0, 1}});
  inst.couplings = {coupling};
  inst.id = "pair";
  return inst;
}

SpinConfig config_of(std::vector<int> values) {
  SpinConfig cfg;
  for (int v : values) cfg.sigma.push_back(std::int8_t(v));
  return cfg;
}

SpinConfig random_config(int n, std::uint64_t seed) {
  SpinConfig cfg;
  cfg.sigma.resize(std::size_t(n));
  for (int v = 0; v < n; ++v)
    cfg.sigma[std::size_t(v)] = (rng_u64(seed, Stream::SaInit, std::uint64_t(v)) & 1u) ? 1 : -1;
  return cfg;
}

// Independent oracle: recompute the energy straight from the serialized file
// text, one edge line at a time.
long long energy_from_text(const std::string& text, const SpinConfig& cfg) {
  std::istringstream in(text);
  std::string line;
  long long n = -1, m = -1, e = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    if (n < 0) {
      ss >> n >> m;
      continue;
    }
    long long i, j, coupling;
    ss >> i >> j >> coupling;
    e += coupling * cfg.sigma[std::size_t(i)] * cfg.sigma[std::size_t(j)];
  }
  return e;
}

}  // namespace

TEST_CASE("gen_instance is deterministic in (graph, seed)") {
  const Graph g = build_chimera({1, 1, 4, {}});
  const Instance a = gen_instance(g, 7);
  const Instance b = gen_instance(g, 7);
  CHECK(a.couplings == b.couplings);
  CHECK(a == b);
  const Instance c = gen_instance(g, 8);
  CHECK(a.couplings != c.couplings);
}

TEST_CASE("1000 seeds give 1000 pairwise distinct C(4,4,4) instances") {
  const Graph g = build_chimera({4, 4, 4, {}});
  std::set<std::vector<std::int8_t>> seen;
  for (std::uint64_t seed = 0; seed < 1000; ++seed)
    seen.insert(gen_instance(g, seed).couplings);
  CHECK(seen.size() == 1000);
}

TEST_CASE("single-edge instance draws a coupling in {-1, +1}") {
  const Graph g = Graph::from_edges(2, {{0, 1}});
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    const Instance inst = gen_instance(g, seed);
    CHECK((inst.couplings[0] == 1 || inst.couplings[0] == -1));
  }
}

TEST_CASE("gen_instance refuses an edgeless graph") {
  CHECK_THROWS_AS(gen_instance(Graph::from_edges(3, {}), 1), ValidationError);
}

TEST_CASE("ferromagnetic pair energy") {
  const Instance inst = two_spin(-1);
  CHECK(energy(inst, config_of({1, 1})) == -1);
  CHECK(energy(inst, config_of({1, -1})) == 1);
}

TEST_CASE("K44 with all J = -1 at all +1 gives -16") {
  const Graph g = build_chimera({1, 1, 4, {}});
  Instance inst;
  inst.graph = g;
  inst.couplings.assign(g.edges.size(), -1);
  inst.id = "ferro";
  SpinConfig all_plus;
  all_plus.sigma.assign(8, 1);
  CHECK(energy(inst, all_plus) == -16);
}

TEST_CASE("energy matches an independent edge-by-edge recomputation") {
  const Graph g = build_chimera({2, 2, 3, {}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = gen_instance(g, seed);
    const SpinConfig cfg = random_config(g.n_vertices, seed + 1000);
    CHECK(energy(inst, cfg) == energy_from_text(instance_text(inst), cfg));
  }
}

TEST_CASE("energy rejects a length mismatch") {
  const Instance inst = two_spin(1);
  CHECK_THROWS_AS(energy(inst, config_of({1, 1, 1})), ValidationError);
}

TEST_CASE("gauge covariance of the energy") {
  const Graph g = build_chimera({2, 2, 2, {}});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = gen_instance(g, seed);
    const SpinConfig cfg = random_config(g.n_vertices, seed + 1);
    const SpinConfig gauge = random_config(g.n_vertices, seed + 2);

    Instance gauged = inst;
    for (std::size_t e = 0; e < inst.graph.edges.size(); ++e) {
      const auto [i, j] = inst.graph.edges[e];
      gauged.couplings[e] = std::int8_t(inst.couplings[e] * gauge.sigma[std::size_t(i)] *
                                        gauge.sigma[std::size_t(j)]);
    }
    SpinConfig mapped = cfg;
    for (std::size_t v = 0; v < cfg.size(); ++v)
      mapped.sigma[v] = std::int8_t(cfg.sigma[v] * gauge.sigma[v]);

    CHECK(energy(gauged, mapped) == energy(inst, cfg));
  }
}

TEST_CASE("instance round-trips through the text format") {
  const Graph g = build_chimera({4, 4, 4, {}});
  const Instance inst = gen_instance(g, 99, "roundtrip");
  std::stringstream ss;
  write_instance(inst, ss);
  const Instance back = read_instance(ss);
  CHECK(back == inst);
}

TEST_CASE("reader validates structure") {
  auto read_text = [](const std::string& text) {
    std::istringstream in(text);
    return read_instance(in, "t");
  };
  CHECK_THROWS_AS(read_text("2 1\n0 0 1\n"), ValidationError);   // self-loop
  CHECK_THROWS_AS(read_text("2 1\n0 1 2\n"), ValidationError);   // |J| != 1
  CHECK_THROWS_AS(read_text("2 1\n0 3 1\n"), ValidationError);   // out of range
  CHECK_THROWS_AS(read_text("2 2\n0 1 1\n1 0 -1\n"), ValidationError);  // duplicate
  CHECK_THROWS_AS(read_text("2 2\n0 1 1\n"), ValidationError);   // missing edge
  CHECK_THROWS_AS(read_text("2 1\nnope\n"), ValidationError);    // malformed line
  CHECK_THROWS_AS(read_text(""), ValidationError);               // missing header
  const Instance ok = read_text("# comment\n3 1\n# another\n2 0 -1\n");
  CHECK(ok.graph.n_vertices == 3);
  CHECK(ok.graph.edges == std::vector<std::pair<int, int>>{{0, 2}});
  CHECK(ok.couplings == std::vector<std::int8_t>{-1});
}

TEST_CASE("id and seed comments survive the round trip") {
  const Graph g = Graph::from_edges(2, {{0, 1}});
  const Instance inst = gen_instance(g, 1234567, "named");
  std::stringstream ss;
  write_instance(inst, ss);
  const Instance back = read_instance(ss, "fallback");
  CHECK(back.id == "named");
  CHECK(back.seed == 1234567);
}
