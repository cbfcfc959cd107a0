#include "hopnet/graph_codec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "hopnet/error.hpp"

namespace hopnet {

namespace {

constexpr int kMaxVertices = 4096;

void check_vertex_count(int v) {
  if (v < 0) throw PreconditionError("vertex count must be non-negative, got " + std::to_string(v));
  if (v > kMaxVertices) {
    throw CapacityError("vertex count " + std::to_string(v) + " exceeds " +
                        std::to_string(kMaxVertices));
  }
}

std::size_t pair_index_unchecked(int v, int a, int b) {
  if (a > b) std::swap(a, b);
  const auto ua = static_cast<std::size_t>(a);
  return ua * (2 * static_cast<std::size_t>(v) - ua - 1) / 2 + static_cast<std::size_t>(b - a - 1);
}

}  // namespace

std::size_t edge_index(int v, int a, int b) {
  if (a == b || a < 0 || b < 0 || a >= v || b >= v) {
    throw InvalidPairError("invalid vertex pair (" + std::to_string(a + 1) + "," +
                           std::to_string(b + 1) + ") for v=" + std::to_string(v));
  }
  return pair_index_unchecked(v, a, b);
}

VertexPair edge_pair(int v, std::size_t j) {
  if (j >= edge_count(v)) {
    throw InvalidPairError("edge index " + std::to_string(j) + " out of range for v=" +
                           std::to_string(v));
  }
  std::size_t row_start = 0;
  for (int a = 0; a + 1 < v; ++a) {
    const auto row_len = static_cast<std::size_t>(v - a - 1);
    if (j < row_start + row_len) return {a, a + 1 + static_cast<int>(j - row_start)};
    row_start += row_len;
  }
  throw InvalidPairError("edge index out of range");
}

int vertices_for_edges(std::size_t n) {
  const auto guess = static_cast<int>(std::llround((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(n))) / 2.0));
  for (int v = std::max(0, guess - 2); v <= guess + 2; ++v) {
    if (edge_count(v) == n && (v >= 2 || n == 0)) return v;
  }
  throw LayoutError("neuron count " + std::to_string(n) + " is not of the form v(v-1)/2");
}

EdgeLayout::EdgeLayout(int v) : v_(v) {
  check_vertex_count(v);
  const std::size_t n = edge_count(v);
  pairs_.reserve(n);
  index_.assign(static_cast<std::size_t>(v) * static_cast<std::size_t>(v), 0);
  for (int a = 0; a < v; ++a) {
    for (int b = a + 1; b < v; ++b) {
      const auto j = static_cast<std::uint32_t>(pairs_.size());
      pairs_.push_back({a, b});
      index_[static_cast<std::size_t>(a) * v + b] = j;
      index_[static_cast<std::size_t>(b) * v + a] = j;
    }
  }
}

std::size_t EdgeLayout::index(int a, int b) const {
  if (a == b || a < 0 || b < 0 || a >= v_ || b >= v_) return edge_index(v_, a, b);
  return index_[static_cast<std::size_t>(a) * v_ + b];
}

bool EdgeLayout::adjacent(std::size_t i, std::size_t j) const {
  if (i >= pairs_.size() || j >= pairs_.size()) {
    throw InvalidPairError("edge index out of range for v=" + std::to_string(v_));
  }
  if (i == j) return false;
  const VertexPair& p = pairs_[i];
  const VertexPair& q = pairs_[j];
  return p.a == q.a || p.a == q.b || p.b == q.a || p.b == q.b;
}

EdgeGraph::EdgeGraph(int v) : v_(v) {
  check_vertex_count(v);
  bits_.assign(edge_count(v), 0);
}

EdgeGraph::EdgeGraph(int v, Bits bits) : v_(v), bits_(std::move(bits)) {
  check_vertex_count(v);
  if (bits_.size() != edge_count(v)) {
    throw DimensionError("bit string of length " + std::to_string(bits_.size()) +
                         " does not match v=" + std::to_string(v) + " (expected " +
                         std::to_string(edge_count(v)) + ")");
  }
  for (auto& bit : bits_) {
    if (bit > 1) throw ParseError("edge bits must be 0 or 1");
  }
}

EdgeGraph EdgeGraph::from_edges(int v, std::span<const VertexPair> edges) {
  EdgeGraph g(v);
  for (const auto& e : edges) g.bits_[edge_index(v, e.a, e.b)] = 1;
  return g;
}

EdgeGraph EdgeGraph::from_adjacency(const std::vector<std::vector<std::uint8_t>>& adj) {
  const int v = static_cast<int>(adj.size());
  EdgeGraph g(v);
  for (int a = 0; a < v; ++a) {
    if (adj[a].size() != adj.size()) throw DimensionError("adjacency matrix is not square");
    if (adj[a][a] != 0) throw PreconditionError("adjacency matrix has a nonzero diagonal");
    for (int b = a + 1; b < v; ++b) {
      if (adj[a][b] != adj[b][a]) throw PreconditionError("adjacency matrix is not symmetric");
      g.bits_[pair_index_unchecked(v, a, b)] = adj[a][b] ? 1 : 0;
    }
  }
  return g;
}

std::size_t EdgeGraph::sparsity() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

bool EdgeGraph::has_edge(int a, int b) const { return bits_[edge_index(v_, a, b)] != 0; }

std::vector<VertexPair> EdgeGraph::edges() const {
  std::vector<VertexPair> out;
  std::size_t j = 0;
  for (int a = 0; a < v_; ++a) {
    for (int b = a + 1; b < v_; ++b, ++j) {
      if (bits_[j]) out.push_back({a, b});
    }
  }
  return out;
}

std::vector<std::vector<std::uint8_t>> EdgeGraph::adjacency() const {
  std::vector<std::vector<std::uint8_t>> adj(v_, std::vector<std::uint8_t>(v_, 0));
  for (const auto& e : edges()) adj[e.a][e.b] = adj[e.b][e.a] = 1;
  return adj;
}

std::vector<int> EdgeGraph::degrees() const {
  std::vector<int> deg(v_, 0);
  for (const auto& e : edges()) {
    ++deg[e.a];
    ++deg[e.b];
  }
  return deg;
}

EdgePermutation::EdgePermutation(int v, std::vector<std::uint32_t> map) : v_(v), map_(std::move(map)) {
  if (map_.size() != edge_count(v)) {
    throw DimensionError("edge permutation length does not match v=" + std::to_string(v));
  }
  std::vector<std::uint8_t> seen(map_.size(), 0);
  for (auto target : map_) {
    if (target >= map_.size() || seen[target]) {
      throw InvalidPermutationError("edge map is not a bijection");
    }
    seen[target] = 1;
  }
}

EdgePermutation EdgePermutation::identity(int v) {
  std::vector<std::uint32_t> map(edge_count(v));
  std::iota(map.begin(), map.end(), 0u);
  return EdgePermutation(v, std::move(map));
}

EdgePermutation EdgePermutation::compose(const EdgePermutation& other) const {
  if (other.v_ != v_) throw DimensionError("composing edge permutations of different sizes");
  std::vector<std::uint32_t> map(map_.size());
  for (std::size_t j = 0; j < map.size(); ++j) map[j] = map_[other.map_[j]];
  return EdgePermutation(v_, std::move(map));
}

EdgePermutation EdgePermutation::inverse() const {
  std::vector<std::uint32_t> map(map_.size());
  for (std::size_t j = 0; j < map.size(); ++j) map[map_[j]] = static_cast<std::uint32_t>(j);
  return EdgePermutation(v_, std::move(map));
}

bool EdgePermutation::preserves_adjacency() const {
  const EdgeLayout layout(v_);
  for (std::size_t i = 0; i < map_.size(); ++i) {
    for (std::size_t j = i + 1; j < map_.size(); ++j) {
      if (layout.adjacent(i, j) != layout.adjacent(map_[i], map_[j])) return false;
    }
  }
  return true;
}

void validate_vertex_permutation(std::span<const int> perm) {
  std::vector<std::uint8_t> seen(perm.size(), 0);
  for (int t : perm) {
    if (t < 0 || static_cast<std::size_t>(t) >= perm.size() || seen[t]) {
      throw InvalidPermutationError("vertex map is not a bijection on [" +
                                    std::to_string(perm.size()) + "]");
    }
    seen[t] = 1;
  }
}

EdgePermutation induced_edge_permutation(std::span<const int> vertex_perm) {
  validate_vertex_permutation(vertex_perm);
  const int v = static_cast<int>(vertex_perm.size());
  std::vector<std::uint32_t> map;
  map.reserve(edge_count(v));
  for (int a = 0; a < v; ++a) {
    for (int b = a + 1; b < v; ++b) {
      map.push_back(static_cast<std::uint32_t>(pair_index_unchecked(v, vertex_perm[a], vertex_perm[b])));
    }
  }
  return EdgePermutation(v, std::move(map));
}

EdgeGraph apply_edge_permutation(const EdgePermutation& pi, const EdgeGraph& g) {
  if (pi.vertices() != g.vertices()) {
    throw DimensionError("permutation on v=" + std::to_string(pi.vertices()) +
                         " applied to graph on v=" + std::to_string(g.vertices()));
  }
  Bits out(g.size(), 0);
  for (std::size_t j = 0; j < out.size(); ++j) out[pi(j)] = g.bits()[j];
  return EdgeGraph(g.vertices(), std::move(out));
}

EdgeGraph apply_vertex_permutation(std::span<const int> vertex_perm, const EdgeGraph& g) {
  validate_vertex_permutation(vertex_perm);
  const int v = g.vertices();
  if (static_cast<int>(vertex_perm.size()) != v) {
    throw DimensionError("vertex permutation size does not match graph");
  }
  Bits out(g.size(), 0);
  std::size_t j = 0;
  for (int a = 0; a < v; ++a) {
    for (int b = a + 1; b < v; ++b, ++j) {
      if (g.bits()[j]) out[pair_index_unchecked(v, vertex_perm[a], vertex_perm[b])] = 1;
    }
  }
  return EdgeGraph(v, std::move(out));
}

std::vector<int> random_vertex_permutation(int v, Rng& rng) {
  std::vector<int> perm(v);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = v - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

EdgeGraph random_orbit_sample(const EdgeGraph& base, Rng& rng) {
  const auto perm = random_vertex_permutation(base.vertices(), rng);
  return apply_vertex_permutation(perm, base);
}

namespace {

void check_enumerable(int v, const char* what) {
  if (v > kMaxEnumerationVertices) {
    throw CapacityError(std::string(what) + " needs v <= " + std::to_string(kMaxEnumerationVertices) +
                        ", got v=" + std::to_string(v));
  }
}

}  // namespace

std::vector<EdgeGraph> enumerate_isomorphism_class(const EdgeGraph& base) {
  const int v = base.vertices();
  check_enumerable(v, "class enumeration");
  std::set<Bits> members;
  std::vector<int> perm(v);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    members.insert(apply_vertex_permutation(perm, base).bits());
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<EdgeGraph> out;
  out.reserve(members.size());
  for (const auto& bits : members) out.emplace_back(v, bits);
  return out;
}

std::size_t isomorphism_class_size(const EdgeGraph& base) {
  return enumerate_isomorphism_class(base).size();
}

namespace {

bool extend_mapping(const std::vector<std::vector<std::uint8_t>>& ga,
                    const std::vector<std::vector<std::uint8_t>>& gb, const std::vector<int>& deg_a,
                    const std::vector<int>& deg_b, std::vector<int>& map, std::vector<std::uint8_t>& used,
                    int next) {
  const int v = static_cast<int>(ga.size());
  if (next == v) return true;
  for (int t = 0; t < v; ++t) {
    if (used[t] || deg_a[next] != deg_b[t]) continue;
    bool ok = true;
    for (int prev = 0; prev < next && ok; ++prev) ok = ga[next][prev] == gb[t][map[prev]];
    if (!ok) continue;
    map[next] = t;
    used[t] = 1;
    if (extend_mapping(ga, gb, deg_a, deg_b, map, used, next + 1)) return true;
    used[t] = 0;
  }
  return false;
}

}  // namespace

bool is_isomorphic_bruteforce(const EdgeGraph& g, const EdgeGraph& h) {
  if (g.vertices() != h.vertices()) throw DimensionError("isomorphism test on different vertex counts");
  check_enumerable(g.vertices(), "brute-force isomorphism");
  if (g.sparsity() != h.sparsity()) return false;
  auto dg = g.degrees();
  auto dh = h.degrees();
  auto sg = dg;
  auto sh = dh;
  std::sort(sg.begin(), sg.end());
  std::sort(sh.begin(), sh.end());
  if (sg != sh) return false;
  std::vector<int> map(g.vertices(), -1);
  std::vector<std::uint8_t> used(g.vertices(), 0);
  return extend_mapping(g.adjacency(), h.adjacency(), dg, dh, map, used, 0);
}

Bits neighbor(const Bits& x, std::size_t j) {
  if (j >= x.size()) throw InvalidPairError("bit index " + std::to_string(j) + " out of range");
  Bits out = x;
  out[j] ^= 1;
  return out;
}

Bits flip_bits(const Bits& x, std::span<const std::size_t> positions) {
  Bits out = x;
  for (auto j : positions) {
    if (j >= x.size()) throw InvalidPairError("bit index " + std::to_string(j) + " out of range");
    out[j] ^= 1;
  }
  return out;
}

}  // namespace hopnet
