#include "spindyn/exact.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "spindyn/errors.hpp"

namespace spindyn {

const char* method_name(GroundTruth::Method m) {
  switch (m) {
    case GroundTruth::Method::BruteForce: return "BruteForce";
    case GroundTruth::Method::ChimeraDP: return "ChimeraDP";
  }
  return "unknown";
}

namespace {

// -1 sorts before +1, index order.
bool lex_less(const SpinConfig& a, const SpinConfig& b) {
  for (std::size_t v = 0; v < a.sigma.size(); ++v) {
    if (a.sigma[v] != b.sigma[v]) return a.sigma[v] < b.sigma[v];
  }
  return false;
}

}  // namespace

GroundTruth brute_force_ground(const Instance& inst) {
  const Graph& g = inst.graph;
  const int n = g.n_vertices;
  const int n_active = g.active_count();
  if (n_active > 30) {
    throw ValidationError("brute_force_ground: refused for " +
                          std::to_string(n_active) + " active vertices (limit 30)");
  }

  const CouplingTable table = build_coupling_table(inst);

  // Spins worth enumerating: active and coupled to something. Everything else
  // is pinned to +1 and contributes no energy.
  std::vector<int> free_v;
  for (int v = 0; v < n; ++v)
    if (g.active[v] && !table[v].empty()) free_v.push_back(v);

  SpinConfig sigma;
  sigma.sigma.assign(n, 1);
  if (free_v.empty()) return {0, std::move(sigma), GroundTruth::Method::BruteForce};

  // Global flip of the free spins preserves the energy, so the first free
  // spin can be pinned. When vertex 0 is free it is pinned to +1 directly;
  // otherwise sigma_0 = +1 already holds and the lexicographically smallest
  // optimum lies in the half where the first free spin is -1.
  sigma.sigma[free_v[0]] = free_v[0] == 0 ? 1 : -1;

  std::int64_t e = energy(inst, sigma);
  std::int64_t best = e;
  SpinConfig witness = sigma;

  const std::vector<int> enumerated(free_v.begin() + 1, free_v.end());
  const std::uint64_t total = enumerated.empty() ? 1 : (1ull << enumerated.size());
  for (std::uint64_t m = 1; m < total; ++m) {
    // Gray-code walk: exactly one spin flips per visited configuration.
    const int v = enumerated[std::countr_zero(m)];
    std::int64_t field = 0;
    for (const auto& [j, coupling] : table[v]) field += coupling * sigma.sigma[j];
    e += -2 * std::int64_t(sigma.sigma[v]) * field;
    sigma.sigma[v] = -sigma.sigma[v];
    if (e < best) {
      best = e;
      witness = sigma;
    } else if (e == best && lex_less(sigma, witness)) {
      witness = sigma;
    }
  }
  return {best, std::move(witness), GroundTruth::Method::BruteForce};
}

namespace {

struct PairKey {
  std::uint64_t operator()(std::uint64_t k) const noexcept {
    k *= 0x9e3779b97f4a7c15ULL;
    return k ^ (k >> 32);
  }
};

constexpr std::int32_t kInf = std::numeric_limits<std::int32_t>::max() / 2;

}  // namespace

GroundTruth chimera_dp_ground(const Instance& inst, const ChimeraSpec& spec) {
  spec.validate();
  const Graph ref = build_chimera(spec);
  if (ref.n_vertices != inst.graph.n_vertices || ref.edges != inst.graph.edges) {
    throw ValidationError(
        "chimera_dp_ground: instance graph does not match the chimera spec "
        "(check rows/cols/shore and the mask)");
  }
  const int R = spec.rows, C = spec.cols, K = spec.shore;
  if (R * K > 20)
    throw ValidationError("chimera_dp_ground: state space too large (rows*shore = " +
                          std::to_string(R * K) + " > 20)");
  if (4 * K > 32)
    throw ValidationError("chimera_dp_ground: shore too large for backtracking words");

  const std::uint32_t mask_k = (1u << K) - 1;
  const std::size_t n_cfg = std::size_t(1) << (2 * K);
  const std::size_t s_small = std::size_t(1) << (R * K);
  const std::size_t s_big = R > 1 ? (std::size_t(1) << ((R + 1) * K)) : s_small;
  const int off_u0 = R * K;

  // Backtracking tables dominate memory: one word per state per cell.
  const std::size_t bp_bytes = std::size_t(R) * C * s_big * sizeof(std::uint32_t);
  if (bp_bytes > (std::size_t(1) << 29))
    throw ValidationError("chimera_dp_ground: state space too large (backtracking "
                          "tables would exceed 512 MiB)");

  std::unordered_map<std::uint64_t, int, PairKey> coupling_of;
  coupling_of.reserve(inst.graph.edges.size() * 2);
  for (std::size_t e = 0; e < inst.graph.edges.size(); ++e) {
    const auto [i, j] = inst.graph.edges[e];
    coupling_of.emplace((std::uint64_t(i) << 32) | std::uint32_t(j), inst.couplings[e]);
  }
  auto coupling = [&](int i, int j) -> int {
    if (i > j) std::swap(i, j);
    const auto it = coupling_of.find((std::uint64_t(i) << 32) | std::uint32_t(j));
    return it == coupling_of.end() ? 0 : it->second;
  };
  auto vid = [&](int r, int c, int u, int t) { return chimera_vertex(spec, r, c, u, t); };
  auto sgn = [](std::uint32_t bits, int t) { return ((bits >> t) & 1u) ? -1 : 1; };

  std::vector<std::int32_t> cur(s_small, kInf), nxt;
  cur[0] = 0;
  std::vector<std::vector<std::uint32_t>> backptr(std::size_t(R) * C);

  std::vector<std::int32_t> e_intra(n_cfg);
  std::vector<std::int32_t> e_left(std::size_t(1) << (2 * K));
  std::vector<std::int32_t> e_up(std::size_t(1) << (2 * K));

  for (int c = 0; c < C; ++c) {
    for (int r = 0; r < R; ++r) {
      const bool has_left = c > 0;
      const bool has_up = r > 0;
      const bool drop_u0 = r == R - 1;
      const int off_r = r * K;

      for (std::uint32_t g = 0; g < n_cfg; ++g) {
        const std::uint32_t a = g & mask_k, b = g >> K;
        std::int32_t e = 0;
        for (int ta = 0; ta < K; ++ta)
          for (int tb = 0; tb < K; ++tb)
            e += coupling(vid(r, c, 0, ta), vid(r, c, 1, tb)) * sgn(a, ta) * sgn(b, tb);
        e_intra[g] = e;
      }
      if (has_left) {
        for (std::uint32_t h = 0; h <= mask_k; ++h)
          for (std::uint32_t b = 0; b <= mask_k; ++b) {
            std::int32_t e = 0;
            for (int t = 0; t < K; ++t)
              e += coupling(vid(r, c - 1, 1, t), vid(r, c, 1, t)) * sgn(h, t) * sgn(b, t);
            e_left[(h << K) | b] = e;
          }
      }
      if (has_up) {
        for (std::uint32_t p = 0; p <= mask_k; ++p)
          for (std::uint32_t a = 0; a <= mask_k; ++a) {
            std::int32_t e = 0;
            for (int t = 0; t < K; ++t)
              e += coupling(vid(r - 1, c, 0, t), vid(r, c, 0, t)) * sgn(p, t) * sgn(a, t);
            e_up[(p << K) | a] = e;
          }
      }

      const std::size_t s_new = drop_u0 ? s_small : s_big;
      nxt.assign(s_new, kInf);
      auto& back = backptr[std::size_t(c) * R + r];
      back.assign(s_new, 0);

      const std::uint32_t clear = ~((mask_k << off_r) | (mask_k << off_u0));
      const std::size_t s_old = cur.size();
      for (std::size_t old = 0; old < s_old; ++old) {
        const std::int32_t e0 = cur[old];
        if (e0 >= kInf) continue;
        const std::uint32_t old32 = std::uint32_t(old);
        const std::uint32_t h = (old32 >> off_r) & mask_k;
        const std::uint32_t p = has_up ? (old32 >> off_u0) & mask_k : 0;
        const std::uint32_t keep = old32 & clear;
        const std::uint32_t from_hp = (h << (2 * K)) | (p << (3 * K));
        const std::int32_t* left_row = has_left ? &e_left[h << K] : nullptr;
        const std::int32_t* up_row = has_up ? &e_up[p << K] : nullptr;
        for (std::uint32_t g = 0; g < n_cfg; ++g) {
          const std::uint32_t a = g & mask_k, b = g >> K;
          std::int32_t e = e0 + e_intra[g];
          if (left_row) e += left_row[b];
          if (up_row) e += up_row[a];
          const std::uint32_t ns =
              keep | (b << off_r) | (drop_u0 ? 0u : (a << off_u0));
          if (e < nxt[ns]) {
            nxt[ns] = e;
            back[ns] = g | from_hp;
          }
        }
      }
      cur.swap(nxt);
    }
  }

  std::size_t best_state = 0;
  std::int32_t best = kInf;
  for (std::size_t s = 0; s < cur.size(); ++s) {
    if (cur[s] < best) {
      best = cur[s];
      best_state = s;
    }
  }

  SpinConfig witness;
  witness.sigma.assign(inst.graph.n_vertices, 1);
  std::uint32_t state = std::uint32_t(best_state);
  for (int c = C - 1; c >= 0; --c) {
    for (int r = R - 1; r >= 0; --r) {
      const std::uint32_t info = backptr[std::size_t(c) * R + r][state];
      const std::uint32_t g = info & (std::uint32_t(n_cfg) - 1);
      const std::uint32_t h = (info >> (2 * K)) & mask_k;
      const std::uint32_t p = (info >> (3 * K)) & mask_k;
      const std::uint32_t a = g & mask_k, b = g >> K;
      for (int t = 0; t < K; ++t) {
        witness.sigma[vid(r, c, 0, t)] = std::int8_t(sgn(a, t));
        witness.sigma[vid(r, c, 1, t)] = std::int8_t(sgn(b, t));
      }
      const int off_r = r * K;
      std::uint32_t prev = state & ~((mask_k << off_r) | (mask_k << off_u0));
      prev |= h << off_r;
      if (r > 0) prev |= p << off_u0;
      state = prev;
    }
  }
  for (int v = 0; v < ref.n_vertices; ++v)
    if (!ref.active[v]) witness.sigma[v] = 1;

  GroundTruth gt{best, std::move(witness), GroundTruth::Method::ChimeraDP};
  if (energy(inst, gt.witness) != gt.energy)
    throw std::logic_error("chimera_dp_ground: backtracked witness energy mismatch");
  return gt;
}

}  // namespace spindyn
