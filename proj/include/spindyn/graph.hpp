#pragma once

#include <string>
#include <utility>
#include <vector>

namespace spindyn {

// Chimera topology parameters: a rows x cols grid of K(shore,shore) cells.
// `mask` lists disabled vertices (broken qubits); masked vertices stay in the
// index space but carry no edges.
struct ChimeraSpec {
  int rows = 4;
  int cols = 4;
  int shore = 4;
  std::vector<int> mask;

  int n_vertices() const { return rows * cols * 2 * shore; }
  void validate() const;
};

// Undirected simple graph. Edges are stored once as (i, j) with i < j in
// canonical (sorted) order; adjacency is the symmetric closure.
struct Graph {
  int n_vertices = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> adjacency;
  std::vector<char> active;

  int active_count() const;
  int degree(int v) const { return static_cast<int>(adjacency[v].size()); }

  // Validates (no self-loops, no duplicates, indices in range) and builds
  // adjacency. `active` defaults to all-active.
  static Graph from_edges(int n, std::vector<std::pair<int, int>> edges,
                          std::vector<char> active = {});

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_vertices == b.n_vertices && a.edges == b.edges && a.active == b.active;
  }
};

// Vertex index of cell (r, c), side u (0 = vertical shore, 1 = horizontal
// shore), shore position t.
inline int chimera_vertex(const ChimeraSpec& spec, int r, int c, int u, int t) {
  return ((r * spec.cols + c) * 2 + u) * spec.shore + t;
}

// Builds the chimera graph: complete bipartite cells, vertical couplers
// between u=0 shores of row-adjacent cells, horizontal couplers between u=1
// shores of column-adjacent cells. Masked vertices lose all incident edges.
Graph build_chimera(const ChimeraSpec& spec);

// Mask file: one vertex index per line, '#' comments tolerated.
std::vector<int> read_mask_file(const std::string& path);

}  // namespace spindyn
