#include "spindyn/instance.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "spindyn/errors.hpp"
#include "spindyn/rng.hpp"

namespace spindyn {

CouplingTable build_coupling_table(const Instance& inst) {
  CouplingTable table(inst.graph.n_vertices);
  for (std::size_t e = 0; e < inst.graph.edges.size(); ++e) {
    const auto [i, j] = inst.graph.edges[e];
    const std::int8_t coupling = inst.couplings[e];
    table[i].emplace_back(j, coupling);
    table[j].emplace_back(i, coupling);
  }
  return table;
}

Instance gen_instance(const Graph& graph, std::uint64_t seed, std::string id) {
  if (graph.edges.empty())
    throw ValidationError("gen_instance: graph has no edges");
  Instance inst;
  inst.graph = graph;
  inst.seed = seed;
  inst.id = id.empty() ? "seed" + std::to_string(seed) : std::move(id);
  inst.couplings.resize(graph.edges.size());
  for (std::size_t e = 0; e < graph.edges.size(); ++e)
    inst.couplings[e] = (rng_u64(seed, Stream::Couplings, e) & 1u) ? 1 : -1;
  return inst;
}

std::int64_t energy(const Instance& inst, const SpinConfig& config) {
  if (config.size() != static_cast<std::size_t>(inst.graph.n_vertices))
    throw ValidationError("energy: configuration length " +
                          std::to_string(config.size()) + " does not match " +
                          std::to_string(inst.graph.n_vertices) + " vertices");
  std::int64_t e = 0;
  for (std::size_t k = 0; k < inst.graph.edges.size(); ++k) {
    const auto [i, j] = inst.graph.edges[k];
    e += std::int64_t(inst.couplings[k]) * config.sigma[i] * config.sigma[j];
  }
  return e;
}

void write_instance(const Instance& inst, std::ostream& out) {
  out << "# id: " << inst.id << "\n";
  out << "# seed: " << inst.seed << "\n";
  out << inst.graph.n_vertices << ' ' << inst.graph.edges.size() << "\n";
  for (std::size_t e = 0; e < inst.graph.edges.size(); ++e) {
    out << inst.graph.edges[e].first << ' ' << inst.graph.edges[e].second << ' '
        << int(inst.couplings[e]) << "\n";
  }
}

void write_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_instance(inst, out);
  if (!out) throw IoError("write failed: " + path);
}

std::string instance_text(const Instance& inst) {
  std::ostringstream ss;
  write_instance(inst, ss);
  return ss.str();
}

namespace {

bool parse_tagged_comment(const std::string& line, const char* tag, std::string* out) {
  std::string prefix = std::string("# ") + tag + ":";
  if (line.rfind(prefix, 0) != 0) return false;
  std::string value = line.substr(prefix.size());
  const auto begin = value.find_first_not_of(" \t");
  const auto end = value.find_last_not_of(" \t\r");
  *out = begin == std::string::npos ? "" : value.substr(begin, end - begin + 1);
  return true;
}

}  // namespace

Instance read_instance(std::istream& in, std::string fallback_id) {
  std::string id = std::move(fallback_id);
  std::uint64_t seed = 0;
  std::string line;
  int line_no = 0;

  auto fail = [&](const std::string& what) -> ValidationError {
    return ValidationError("instance file, line " + std::to_string(line_no) + ": " + what);
  };

  auto next_data_line = [&](std::string* out) -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.rfind('#', 0) == 0) {
        std::string value;
        if (parse_tagged_comment(line, "id", &value) && !value.empty()) id = value;
        if (parse_tagged_comment(line, "seed", &value) && !value.empty()) {
          try {
            seed = std::stoull(value);
          } catch (const std::exception&) {
            throw fail("bad seed comment");
          }
        }
        continue;
      }
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      *out = line;
      return true;
    }
    return false;
  };

  std::string data;
  if (!next_data_line(&data)) throw ValidationError("instance file: missing header");
  long long n = 0, m = 0;
  {
    std::istringstream ss(data);
    std::string rest;
    if (!(ss >> n >> m) || (ss >> rest) || n < 0 || m < 0)
      throw fail("malformed header, expected 'N M'");
  }

  std::vector<std::pair<int, int>> edges;
  std::vector<std::int8_t> couplings;
  edges.reserve(m);
  couplings.reserve(m);
  for (long long k = 0; k < m; ++k) {
    if (!next_data_line(&data))
      throw ValidationError("instance file: expected " + std::to_string(m) +
                            " edges, found " + std::to_string(k));
    std::istringstream ss(data);
    long long i, j, coupling;
    std::string rest;
    if (!(ss >> i >> j >> coupling) || (ss >> rest))
      throw fail("malformed edge line, expected 'i j J'");
    if (i == j) throw fail("self-loop at vertex " + std::to_string(i));
    if (i < 0 || i >= n || j < 0 || j >= n) throw fail("vertex index out of range");
    if (coupling != 1 && coupling != -1) throw fail("coupling must be -1 or +1");
    if (i > j) std::swap(i, j);
    edges.emplace_back(int(i), int(j));
    couplings.push_back(std::int8_t(coupling));
  }
  if (next_data_line(&data)) throw fail("trailing data after the edge list");

  // Canonicalize edge order, keeping couplings aligned.
  std::vector<std::size_t> order(edges.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
  std::vector<std::pair<int, int>> sorted_edges(edges.size());
  std::vector<std::int8_t> sorted_couplings(edges.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    sorted_edges[k] = edges[order[k]];
    sorted_couplings[k] = couplings[order[k]];
  }
  for (std::size_t k = 1; k < sorted_edges.size(); ++k) {
    if (sorted_edges[k] == sorted_edges[k - 1]) {
      throw ValidationError("instance file: duplicate edge (" +
                            std::to_string(sorted_edges[k].first) + ", " +
                            std::to_string(sorted_edges[k].second) + ")");
    }
  }

  Instance inst;
  inst.graph = Graph::from_edges(int(n), std::move(sorted_edges));
  inst.couplings = std::move(sorted_couplings);
  inst.id = id.empty() ? "unnamed" : id;
  inst.seed = seed;
  return inst;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance file: " + path);
  std::string stem = path;
  if (const auto slash = stem.find_last_of("/\\"); slash != std::string::npos)
    stem = stem.substr(slash + 1);
  if (const auto dot = stem.find_last_of('.'); dot != std::string::npos)
    stem = stem.substr(0, dot);
  return read_instance(in, stem);
}

}  // namespace spindyn
