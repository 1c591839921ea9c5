#include "spindyn/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "spindyn/errors.hpp"

namespace spindyn {

void ChimeraSpec::validate() const {
  if (rows < 1 || cols < 1 || shore < 1)
    throw ValidationError("chimera spec: rows, cols and shore must be >= 1");
  const int n = n_vertices();
  for (int v : mask) {
    if (v < 0 || v >= n) {
      throw ValidationError("chimera spec: mask index " + std::to_string(v) +
                            " out of range [0, " + std::to_string(n) + ")");
    }
  }
}

int Graph::active_count() const {
  return static_cast<int>(std::count(active.begin(), active.end(), char(1)));
}

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edges,
                        std::vector<char> active) {
  if (n < 0) throw ValidationError("graph: negative vertex count");
  Graph g;
  g.n_vertices = n;
  if (active.empty()) active.assign(n, 1);
  if (static_cast<int>(active.size()) != n)
    throw ValidationError("graph: active flags length mismatch");
  g.active = std::move(active);

  for (auto& [i, j] : edges) {
    if (i == j)
      throw ValidationError("graph: self-loop at vertex " + std::to_string(i));
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n)
      throw ValidationError("graph: edge (" + std::to_string(i) + ", " +
                            std::to_string(j) + ") out of range");
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw ValidationError("graph: duplicate edge");
  g.edges = std::move(edges);

  g.adjacency.assign(n, {});
  for (auto [i, j] : g.edges) {
    g.adjacency[i].push_back(j);
    g.adjacency[j].push_back(i);
  }
  return g;
}

Graph build_chimera(const ChimeraSpec& spec) {
  spec.validate();
  const int n = spec.n_vertices();
  std::vector<char> active(n, 1);
  for (int v : spec.mask) active[v] = 0;

  std::vector<std::pair<int, int>> edges;
  auto add = [&](int a, int b) {
    if (active[a] && active[b]) edges.emplace_back(a, b);
  };

  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      for (int ta = 0; ta < spec.shore; ++ta)
        for (int tb = 0; tb < spec.shore; ++tb)
          add(chimera_vertex(spec, r, c, 0, ta), chimera_vertex(spec, r, c, 1, tb));
      if (r + 1 < spec.rows)
        for (int t = 0; t < spec.shore; ++t)
          add(chimera_vertex(spec, r, c, 0, t), chimera_vertex(spec, r + 1, c, 0, t));
      if (c + 1 < spec.cols)
        for (int t = 0; t < spec.shore; ++t)
          add(chimera_vertex(spec, r, c, 1, t), chimera_vertex(spec, r, c + 1, 1, t));
    }
  }
  return Graph::from_edges(n, std::move(edges), std::move(active));
}

std::vector<int> read_mask_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mask file: " + path);
  std::vector<int> mask;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    int v;
    if (ss >> v) {
      std::string rest;
      if (ss >> rest)
        throw ValidationError(path + ": malformed mask line " + std::to_string(line_no));
      mask.push_back(v);
    }
  }
  std::sort(mask.begin(), mask.end());
  mask.erase(std::unique(mask.begin(), mask.end()), mask.end());
  return mask;
}

}  // namespace spindyn
