#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hopnet/rng.hpp"

namespace hopnet {

using Bits = std::vector<std::uint8_t>;

// Vertices are 0-based inside the library; text formats use 1-based labels.
struct VertexPair {
  int a = 0;
  int b = 0;
  bool operator==(const VertexPair&) const = default;
};

constexpr std::size_t edge_count(int v) {
  return v < 2 ? 0 : static_cast<std::size_t>(v) * static_cast<std::size_t>(v - 1) / 2;
}

// Lexicographic index of the unordered pair {a, b}, a != b.
std::size_t edge_index(int v, int a, int b);
VertexPair edge_pair(int v, std::size_t j);

// Solves n = C(v, 2) for v; throws LayoutError when n is not triangular.
int vertices_for_edges(std::size_t n);

// Lookup table of pair endpoints for a fixed vertex count.
class EdgeLayout {
 public:
  explicit EdgeLayout(int v);

  int vertices() const { return v_; }
  std::size_t edges() const { return pairs_.size(); }
  const VertexPair& pair(std::size_t j) const { return pairs_[j]; }
  std::size_t index(int a, int b) const;

  // True when edges i != j share exactly one endpoint.
  bool adjacent(std::size_t i, std::size_t j) const;

 private:
  int v_;
  std::vector<VertexPair> pairs_;
  std::vector<std::uint32_t> index_;
};

class EdgeGraph {
 public:
  EdgeGraph() = default;
  explicit EdgeGraph(int v);
  EdgeGraph(int v, Bits bits);

  // Edges given as 0-based vertex pairs.
  static EdgeGraph from_edges(int v, std::span<const VertexPair> edges);
  static EdgeGraph from_adjacency(const std::vector<std::vector<std::uint8_t>>& adj);

  int vertices() const { return v_; }
  std::size_t size() const { return bits_.size(); }
  const Bits& bits() const { return bits_; }
  std::size_t sparsity() const;
  bool has_edge(int a, int b) const;
  std::vector<VertexPair> edges() const;
  std::vector<std::vector<std::uint8_t>> adjacency() const;
  std::vector<int> degrees() const;

  bool operator==(const EdgeGraph&) const = default;
  bool operator<(const EdgeGraph& other) const { return bits_ < other.bits_; }

 private:
  int v_ = 0;
  Bits bits_;
};

// Permutation of edge slots. Applying it moves bit j to position map[j].
class EdgePermutation {
 public:
  EdgePermutation() = default;
  EdgePermutation(int v, std::vector<std::uint32_t> map);

  static EdgePermutation identity(int v);

  int vertices() const { return v_; }
  std::size_t size() const { return map_.size(); }
  std::uint32_t operator()(std::size_t j) const { return map_[j]; }
  const std::vector<std::uint32_t>& map() const { return map_; }

  // (this * other)(j) = this(other(j)).
  EdgePermutation compose(const EdgePermutation& other) const;
  EdgePermutation inverse() const;
  bool preserves_adjacency() const;

  bool operator==(const EdgePermutation&) const = default;

 private:
  int v_ = 0;
  std::vector<std::uint32_t> map_;
};

void validate_vertex_permutation(std::span<const int> perm);
EdgePermutation induced_edge_permutation(std::span<const int> vertex_perm);
EdgeGraph apply_edge_permutation(const EdgePermutation& pi, const EdgeGraph& g);
EdgeGraph apply_vertex_permutation(std::span<const int> vertex_perm, const EdgeGraph& g);

std::vector<int> random_vertex_permutation(int v, Rng& rng);
EdgeGraph random_orbit_sample(const EdgeGraph& base, Rng& rng);

constexpr int kMaxEnumerationVertices = 9;

// All distinct relabelings of base, sorted by bit string. v <= 9.
std::vector<EdgeGraph> enumerate_isomorphism_class(const EdgeGraph& base);
// Class size |S_v| / |Aut|; same guard as enumeration.
std::size_t isomorphism_class_size(const EdgeGraph& base);
bool is_isomorphic_bruteforce(const EdgeGraph& g, const EdgeGraph& h);

// Flip bit j.
Bits neighbor(const Bits& x, std::size_t j);
Bits flip_bits(const Bits& x, std::span<const std::size_t> positions);

enum class Family { clique, bipartite, chain, cycle, johnson, paley, circulant };

struct FamilySpec {
  Family family = Family::clique;
  int v = 0;
  int k = 0;                // clique size, chain/cycle length, bipartite side
  int johnson_n = 0;
  int johnson_k = 0;
  std::vector<int> jumps;   // circulant only

  // Parses "clique:v=20,k=10", "paley:v=13", "johnson:n=7,k=3",
  // "circulant:v=32,jumps=2+4".
  static FamilySpec parse(std::string_view text);
  std::string to_string() const;
  std::string name() const;
  // The k column of result tables (0 when the family has no size parameter).
  int k_param() const;
  bool operator==(const FamilySpec&) const = default;
};

// Family string with the vertex count left free, e.g. "clique:k=v/2".
struct FamilyTemplate {
  Family family = Family::clique;
  std::optional<int> k;
  bool k_half = false;
  std::vector<int> jumps;

  static FamilyTemplate parse(std::string_view text);
  FamilySpec at(int v) const;
};

EdgeGraph make_family(const FamilySpec& spec);

// Text format: "v=<int> bits=<01...>" or "v=<int> edges=a-b,c-d" (1-based).
std::string format_graph(const EdgeGraph& g);
EdgeGraph parse_graph(std::string_view line);
std::vector<EdgeGraph> read_graphs(std::istream& in);
void write_graphs(std::ostream& out, std::span<const EdgeGraph> graphs);

}  // namespace hopnet
