#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "hopnet/error.hpp"
#include "hopnet/graph_codec.hpp"

namespace hopnet {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

int parse_int(std::string_view text, std::string_view what) {
  text = trim(text);
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ParseError("expected an integer for " + std::string(what) + ", got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<int> parse_jumps(std::string_view text) {
  std::vector<int> jumps;
  while (!text.empty()) {
    const auto plus = text.find('+');
    jumps.push_back(parse_int(text.substr(0, plus), "jump"));
    if (plus == std::string_view::npos) break;
    text.remove_prefix(plus + 1);
  }
  return jumps;
}

Family parse_family_name(std::string_view name) {
  static const std::map<std::string, Family, std::less<>> names = {
      {"clique", Family::clique},   {"bipartite", Family::bipartite}, {"chain", Family::chain},
      {"cycle", Family::cycle},     {"johnson", Family::johnson},     {"paley", Family::paley},
      {"circulant", Family::circulant}};
  auto it = names.find(trim(name));
  if (it == names.end()) throw FamilyParamError("unknown family '" + std::string(name) + "'");
  return it->second;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::clique: return "clique";
    case Family::bipartite: return "bipartite";
    case Family::chain: return "chain";
    case Family::cycle: return "cycle";
    case Family::johnson: return "johnson";
    case Family::paley: return "paley";
    case Family::circulant: return "circulant";
  }
  return "unknown";
}

// Splits "name:key=value,key=value".
std::pair<std::string_view, std::map<std::string, std::string, std::less<>>> split_spec(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  std::string_view name = text.substr(0, colon);
  std::map<std::string, std::string, std::less<>> kv;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      std::string_view item = trim(rest.substr(0, comma));
      if (!item.empty()) {
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) {
          throw ParseError("family parameter '" + std::string(item) + "' is not key=value");
        }
        std::string key(trim(item.substr(0, eq)));
        if (kv.count(key)) throw ParseError("duplicate family parameter '" + key + "'");
        kv[key] = std::string(trim(item.substr(eq + 1)));
      }
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  return {name, std::move(kv)};
}

void reject_unknown_keys(const std::map<std::string, std::string, std::less<>>& kv,
                         std::initializer_list<std::string_view> allowed, std::string_view family) {
  for (const auto& [key, value] : kv) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw FamilyParamError("unknown parameter '" + key + "' for family " + std::string(family));
    }
  }
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

bool is_prime(int v) {
  if (v < 2) return false;
  for (int d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

int require_key(const std::map<std::string, std::string, std::less<>>& kv, std::string_view key,
                std::string_view family) {
  auto it = kv.find(key);
  if (it == kv.end()) {
    throw FamilyParamError("family " + std::string(family) + " requires parameter " + std::string(key));
  }
  return parse_int(it->second, key);
}

}  // namespace

FamilySpec FamilySpec::parse(std::string_view text) {
  auto [name, kv] = split_spec(text);
  FamilySpec spec;
  spec.family = parse_family_name(name);
  const std::string fname = family_name(spec.family);
  switch (spec.family) {
    case Family::clique:
    case Family::bipartite:
    case Family::chain:
    case Family::cycle:
      reject_unknown_keys(kv, {"v", "k"}, fname);
      spec.v = require_key(kv, "v", fname);
      spec.k = require_key(kv, "k", fname);
      break;
    case Family::paley:
      reject_unknown_keys(kv, {"v"}, fname);
      spec.v = require_key(kv, "v", fname);
      break;
    case Family::johnson: {
      reject_unknown_keys(kv, {"n", "k", "v"}, fname);
      spec.johnson_n = require_key(kv, "n", fname);
      spec.johnson_k = require_key(kv, "k", fname);
      const long long v = binomial(spec.johnson_n, spec.johnson_k);
      if (v > (1 << 16)) throw CapacityError("johnson graph has too many vertices");
      spec.v = static_cast<int>(v);
      if (kv.count("v") && require_key(kv, "v", fname) != spec.v) {
        throw FamilyParamError("johnson requires v = C(n,k) = " + std::to_string(spec.v));
      }
      break;
    }
    case Family::circulant: {
      reject_unknown_keys(kv, {"v", "jumps"}, fname);
      spec.v = require_key(kv, "v", fname);
      auto it = kv.find("jumps");
      if (it == kv.end()) throw FamilyParamError("family circulant requires parameter jumps");
      spec.jumps = parse_jumps(it->second);
      break;
    }
  }
  return spec;
}

std::string FamilySpec::name() const { return family_name(family); }

std::string FamilySpec::to_string() const {
  std::ostringstream os;
  os << family_name(family) << ':';
  switch (family) {
    case Family::clique:
    case Family::bipartite:
    case Family::chain:
    case Family::cycle:
      os << "v=" << v << ",k=" << k;
      break;
    case Family::paley:
      os << "v=" << v;
      break;
    case Family::johnson:
      os << "n=" << johnson_n << ",k=" << johnson_k;
      break;
    case Family::circulant:
      os << "v=" << v << ",jumps=";
      for (std::size_t i = 0; i < jumps.size(); ++i) os << (i ? "+" : "") << jumps[i];
      break;
  }
  return os.str();
}

int FamilySpec::k_param() const {
  switch (family) {
    case Family::johnson: return johnson_k;
    case Family::paley:
    case Family::circulant: return 0;
    default: return k;
  }
}

FamilyTemplate FamilyTemplate::parse(std::string_view text) {
  auto [name, kv] = split_spec(text);
  FamilyTemplate t;
  t.family = parse_family_name(name);
  const std::string fname = family_name(t.family);
  if (t.family == Family::johnson) {
    throw FamilyParamError("johnson graphs cannot be scaled by vertex count");
  }
  reject_unknown_keys(kv, {"k", "jumps"}, fname);
  if (auto it = kv.find("k"); it != kv.end()) {
    const bool sized = t.family == Family::clique || t.family == Family::bipartite ||
                       t.family == Family::chain || t.family == Family::cycle;
    if (!sized) throw FamilyParamError("family " + fname + " takes no k parameter");
    if (it->second == "v/2") {
      t.k_half = true;
    } else {
      t.k = parse_int(it->second, "k");
    }
  }
  if (auto it = kv.find("jumps"); it != kv.end()) {
    if (t.family != Family::circulant) throw FamilyParamError("only circulant takes jumps");
    t.jumps = parse_jumps(it->second);
  }
  return t;
}

FamilySpec FamilyTemplate::at(int v) const {
  FamilySpec spec;
  spec.family = family;
  spec.v = v;
  spec.jumps = jumps;
  if (k_half) {
    spec.k = v / 2;
  } else if (k) {
    spec.k = *k;
  } else if (family == Family::clique || family == Family::bipartite || family == Family::chain ||
             family == Family::cycle) {
    spec.k = v / 2;
  }
  return spec;
}

EdgeGraph make_family(const FamilySpec& spec) {
  const int v = spec.v;
  const std::string fname = family_name(spec.family);
  auto fail = [&](const std::string& constraint) -> EdgeGraph {
    throw FamilyParamError(fname + ": " + constraint + " violated (" + spec.to_string() + ")");
  };
  if (v < 1) return fail("v >= 1");
  std::vector<VertexPair> edges;
  switch (spec.family) {
    case Family::clique:
      if (spec.k < 2 || spec.k > v) return fail("2 <= k <= v");
      for (int a = 0; a < spec.k; ++a) {
        for (int b = a + 1; b < spec.k; ++b) edges.push_back({a, b});
      }
      break;
    case Family::bipartite:
      if (spec.k < 1 || 2 * spec.k != v) return fail("k = v/2");
      for (int a = 0; a < spec.k; ++a) {
        for (int b = spec.k; b < v; ++b) edges.push_back({a, b});
      }
      break;
    case Family::chain:
      if (spec.k < 2 || spec.k > v) return fail("2 <= k <= v");
      for (int a = 0; a + 1 < spec.k; ++a) edges.push_back({a, a + 1});
      break;
    case Family::cycle:
      if (spec.k < 3 || spec.k > v) return fail("3 <= k <= v");
      for (int a = 0; a + 1 < spec.k; ++a) edges.push_back({a, a + 1});
      edges.push_back({0, spec.k - 1});
      break;
    case Family::paley: {
      if (!is_prime(v) || v % 4 != 1) return fail("v prime with v = 1 mod 4");
      std::vector<std::uint8_t> residue(v, 0);
      for (int t = 1; t < v; ++t) residue[(static_cast<long long>(t) * t) % v] = 1;
      for (int a = 0; a < v; ++a) {
        for (int b = a + 1; b < v; ++b) {
          if (residue[(b - a) % v]) edges.push_back({a, b});
        }
      }
      break;
    }
    case Family::johnson: {
      const int n = spec.johnson_n;
      const int k = spec.johnson_k;
      if (n < 1 || k < 1 || k > n) return fail("1 <= k <= n");
      if (binomial(n, k) != v) return fail("v = C(n,k)");
      // k-subsets as bitmasks in lexicographic order of their sorted elements.
      std::vector<std::vector<int>> subsets;
      std::vector<int> cur(k);
      for (int i = 0; i < k; ++i) cur[i] = i;
      for (;;) {
        subsets.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int t = i + 1; t < k; ++t) cur[t] = cur[t - 1] + 1;
      }
      for (int a = 0; a < v; ++a) {
        for (int b = a + 1; b < v; ++b) {
          std::vector<int> common;
          std::set_intersection(subsets[a].begin(), subsets[a].end(), subsets[b].begin(),
                                subsets[b].end(), std::back_inserter(common));
          if (static_cast<int>(common.size()) == k - 1) edges.push_back({a, b});
        }
      }
      break;
    }
    case Family::circulant: {
      if (spec.jumps.empty()) return fail("nonempty jump list");
      std::vector<std::uint8_t> seen(v, 0);
      for (int s : spec.jumps) {
        if (s < 1 || 2 * s > v) return fail("jumps within [1, v/2]");
        if (seen[s]) return fail("distinct jumps");
        seen[s] = 1;
      }
      for (int a = 0; a < v; ++a) {
        for (int s : spec.jumps) {
          const int b = (a + s) % v;
          edges.push_back({std::min(a, b), std::max(a, b)});
        }
      }
      std::sort(edges.begin(), edges.end(), [](const VertexPair& x, const VertexPair& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
      });
      edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
      break;
    }
  }
  return EdgeGraph::from_edges(v, edges);
}

std::string format_graph(const EdgeGraph& g) {
  std::string out = "v=" + std::to_string(g.vertices()) + " bits=";
  out.reserve(out.size() + g.size());
  for (auto bit : g.bits()) out.push_back(bit ? '1' : '0');
  return out;
}

EdgeGraph parse_graph(std::string_view line) {
  line = trim(line);
  const auto space = line.find_first_of(" \t");
  if (line.substr(0, 2) != "v=" || space == std::string_view::npos) {
    throw ParseError("graph line must look like 'v=<int> bits=...' or 'v=<int> edges=...'");
  }
  const int v = parse_int(line.substr(2, space - 2), "v");
  if (v < 1) throw ParseError("graph vertex count must be positive");
  std::string_view body = trim(line.substr(space));
  if (body.substr(0, 5) == "bits=") {
    body.remove_prefix(5);
    Bits bits;
    bits.reserve(body.size());
    for (char c : body) {
      if (c != '0' && c != '1') throw ParseError("bits must contain only 0 and 1");
      bits.push_back(c == '1');
    }
    return EdgeGraph(v, std::move(bits));
  }
  if (body.substr(0, 6) == "edges=") {
    body.remove_prefix(6);
    std::vector<VertexPair> edges;
    while (!body.empty()) {
      const auto comma = body.find(',');
      std::string_view item = trim(body.substr(0, comma));
      if (!item.empty()) {
        const auto dash = item.find('-');
        if (dash == std::string_view::npos) throw ParseError("edge '" + std::string(item) + "' is not a-b");
        const int a = parse_int(item.substr(0, dash), "edge endpoint");
        const int b = parse_int(item.substr(dash + 1), "edge endpoint");
        edges.push_back({a - 1, b - 1});
      }
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
    return EdgeGraph::from_edges(v, edges);
  }
  throw ParseError("graph line needs bits= or edges=");
}

std::vector<EdgeGraph> read_graphs(std::istream& in) {
  std::vector<EdgeGraph> out;
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.push_back(parse_graph(t));
  }
  return out;
}

void write_graphs(std::ostream& out, std::span<const EdgeGraph> graphs) {
  for (const auto& g : graphs) out << format_graph(g) << '\n';
}

}  // namespace hopnet
