#pragma once

#include "mlqls/common.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mlqls {

using Edge = std::pair<PhysQubit, PhysQubit>;

/// BFS hop counts between every pair of vertices, row-major.
/// Throws InvalidInput when the graph is disconnected.
inline std::vector<int> all_pairs_distance(int n, const std::vector<std::vector<PhysQubit>>& adj) {
  std::vector<int> dist(static_cast<std::size_t>(n) * n, -1);
  std::vector<PhysQubit> queue(static_cast<std::size_t>(n));
  for (PhysQubit s = 0; s < n; ++s) {
    int* row = dist.data() + static_cast<std::size_t>(s) * n;
    std::size_t head = 0, tail = 0;
    row[s] = 0;
    queue[tail++] = s;
    while (head < tail) {
      PhysQubit u = queue[head++];
      for (PhysQubit v : adj[u]) {
        if (row[v] < 0) {
          row[v] = row[u] + 1;
          queue[tail++] = v;
        }
      }
    }
    if (tail != static_cast<std::size_t>(n)) throw InvalidInput("coupling graph is disconnected");
  }
  return dist;
}

/// Device connectivity: vertices are physical qubits, edges allow two-qubit gates.
class CouplingGraph {
 public:
  CouplingGraph() = default;

  CouplingGraph(int num_physical, std::vector<Edge> edges, std::string name = "custom")
      : n_(num_physical), name_(std::move(name)) {
    if (n_ < 1) throw InvalidInput("device needs at least one qubit");
    for (auto& [a, b] : edges) {
      if (a < 0 || b < 0 || a >= n_ || b >= n_) throw InvalidInput("edge endpoint out of range");
      if (a == b) throw InvalidInput("self-loop on qubit " + std::to_string(a));
      if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    adj_.assign(static_cast<std::size_t>(n_), {});
    edge_id_.assign(static_cast<std::size_t>(n_) * n_, -1);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      auto [a, b] = edges_[i];
      adj_[a].push_back(b);
      adj_[b].push_back(a);
      edge_id_[index(a, b)] = edge_id_[index(b, a)] = static_cast<int>(i);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
    dist_ = all_pairs_distance(n_, adj_);
    diameter_ = dist_.empty() ? 0 : *std::max_element(dist_.begin(), dist_.end());
  }

  [[nodiscard]] int num_physical() const noexcept { return n_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
  [[nodiscard]] std::size_t num_edges() const noexcept { return edges_.size(); }
  [[nodiscard]] std::span<const PhysQubit> neighbors(PhysQubit p) const { return adj_[p]; }
  [[nodiscard]] int degree(PhysQubit p) const { return static_cast<int>(adj_[p].size()); }
  [[nodiscard]] int dist(PhysQubit a, PhysQubit b) const { return dist_[index(a, b)]; }
  [[nodiscard]] bool adjacent(PhysQubit a, PhysQubit b) const { return edge_id_[index(a, b)] >= 0; }
  /// Index into edges(), or -1.
  [[nodiscard]] int edge_id(PhysQubit a, PhysQubit b) const { return edge_id_[index(a, b)]; }
  [[nodiscard]] int diameter() const noexcept { return diameter_; }
  [[nodiscard]] const std::vector<int>& distance_matrix() const noexcept { return dist_; }

 private:
  [[nodiscard]] std::size_t index(PhysQubit a, PhysQubit b) const {
    return static_cast<std::size_t>(a) * n_ + b;
  }

  int n_ = 0;
  std::string name_;
  std::vector<Edge> edges_;
  std::vector<std::vector<PhysQubit>> adj_;
  std::vector<int> edge_id_;
  std::vector<int> dist_;
  int diameter_ = 0;
};

// ---------------------------------------------------------------------------
// Device library

inline CouplingGraph make_grid(int rows, int cols) {
  if (rows < 1 || cols < 1 || rows * cols < 2) throw InvalidInput("grid needs at least 2 qubits");
  std::vector<Edge> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      int p = r * cols + c;
      if (c + 1 < cols) edges.emplace_back(p, p + 1);
      if (r + 1 < rows) edges.emplace_back(p, p + cols);
    }
  }
  std::string name = rows == cols ? "grid" + std::to_string(rows)
                                  : "grid" + std::to_string(rows) + "x" + std::to_string(cols);
  return CouplingGraph(rows * cols, std::move(edges), std::move(name));
}

inline CouplingGraph make_grid(int n) {
  if (n < 2) throw InvalidInput("grid side must be >= 2");
  return make_grid(n, n);
}

inline CouplingGraph make_path(int n) {
  if (n < 2) throw InvalidInput("path needs at least 2 qubits");
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return CouplingGraph(n, std::move(edges), "path" + std::to_string(n));
}

/// IBM Ourense: 5 qubits in a T shape.
inline CouplingGraph make_ourense() {
  return CouplingGraph(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}}, "ourense");
}

/// Google Sycamore, 54 qubits on a rotated square lattice. Qubits are
/// numbered row-major over the occupied lattice sites.
inline CouplingGraph make_sycamore54() {
  static constexpr std::string_view kLayout[] = {
      "-----AB---", "----ABCD--", "---ABCDEF-", "--ABCDEFGH", "-ABCDEFGHI",
      "ABCDEFGHI-", "-CDEFGHI--", "--EFGHI---", "---GHI----", "----I-----",
  };
  constexpr int rows = 10, cols = 10;
  std::vector<int> id(rows * cols, -1);
  int n = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (kLayout[r][c] != '-') id[r * cols + c] = n++;
    }
  }
  std::vector<Edge> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      int p = id[r * cols + c];
      if (p < 0) continue;
      if (c + 1 < cols && id[r * cols + c + 1] >= 0) edges.emplace_back(p, id[r * cols + c + 1]);
      if (r + 1 < rows && id[(r + 1) * cols + c] >= 0) edges.emplace_back(p, id[(r + 1) * cols + c]);
    }
  }
  return CouplingGraph(n, std::move(edges), "sycamore54");
}

/// IBM Eagle heavy-hex lattice with 127 qubits, in IBM's numbering.
inline CouplingGraph make_eagle127() {
  std::vector<Edge> edges;
  // Seven horizontal rows; first and last have 14 qubits, the rest 15.
  const int row_start[7] = {0, 18, 37, 56, 75, 94, 113};
  const int row_len[7] = {14, 15, 15, 15, 15, 15, 14};
  const int row_col0[7] = {0, 0, 0, 0, 0, 0, 1};  // column of the first qubit
  for (int r = 0; r < 7; ++r) {
    for (int i = 0; i + 1 < row_len[r]; ++i) edges.emplace_back(row_start[r] + i, row_start[r] + i + 1);
  }
  auto at = [&](int r, int col) { return row_start[r] + (col - row_col0[r]); };
  // Bridge qubits between row r and r+1; even gaps use columns 0,4,8,12 and
  // odd gaps use 2,6,10,14.
  int bridge = 0;
  const int bridge_start[6] = {14, 33, 52, 71, 90, 109};
  for (int r = 0; r < 6; ++r) {
    bridge = bridge_start[r];
    int first = (r % 2 == 0) ? 0 : 2;
    for (int k = 0; k < 4; ++k, ++bridge) {
      int col = first + 4 * k;
      edges.emplace_back(at(r, col), bridge);
      edges.emplace_back(bridge, at(r + 1, col));
    }
  }
  return CouplingGraph(127, std::move(edges), "eagle127");
}

namespace detail {
inline int parse_positive(std::string_view s, std::string_view what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v <= 0) {
    throw InvalidInput("bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}
}  // namespace detail

/// Library device from a compact spec: `grid:N`, `grid:RxC`, `path:N`,
/// `sycamore`, `eagle`, `ourense`. File-backed devices are handled by the
/// JSON reader.
inline CouplingGraph make_device(std::string_view spec) {
  auto colon = spec.find(':');
  std::string_view kind = spec.substr(0, colon);
  std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (kind == "grid") {
    auto x = arg.find('x');
    if (x == std::string_view::npos) return make_grid(detail::parse_positive(arg, "grid size"));
    return make_grid(detail::parse_positive(arg.substr(0, x), "grid rows"),
                     detail::parse_positive(arg.substr(x + 1), "grid cols"));
  }
  if (kind == "path") return make_path(detail::parse_positive(arg, "path length"));
  if (kind == "sycamore" || kind == "sycamore54") return make_sycamore54();
  if (kind == "eagle" || kind == "eagle127") return make_eagle127();
  if (kind == "ourense") return make_ourense();
  throw InvalidInput("unknown device kind '" + std::string(kind) + "'");
}

/// Orbit label per vertex under the automorphism group, or nullopt when the
/// backtracking search exceeds `node_limit`.
inline std::optional<std::vector<int>> automorphism_orbits(const CouplingGraph& g,
                                                           std::uint64_t node_limit = 2'000'000) {
  const int n = g.num_physical();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::uint64_t nodes = 0;

  // Search for an automorphism sending u to v. Vertices are assigned in BFS
  // order from u so every vertex after the first has an assigned neighbour.
  auto try_map = [&](int u, int v, std::vector<int>& image) -> std::optional<bool> {
    std::vector<int> order;
    order.reserve(n);
    std::vector<char> seen(n, 0);
    std::deque<int> q{u};
    seen[u] = 1;
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      order.push_back(x);
      for (int y : g.neighbors(x)) {
        if (!seen[y]) {
          seen[y] = 1;
          q.push_back(y);
        }
      }
    }
    image.assign(n, -1);
    std::vector<char> used(n, 0);
    bool aborted = false;
    auto consistent = [&](int x, int y) {
      if (used[y] || g.degree(x) != g.degree(y) || g.dist(u, x) != g.dist(v, y)) return false;
      for (int z : g.neighbors(x)) {
        if (image[z] >= 0 && !g.adjacent(image[z], y)) return false;
      }
      // Non-neighbours of x that are assigned must map to non-neighbours of y.
      int assigned_neighbors = 0;
      for (int z : g.neighbors(x)) assigned_neighbors += image[z] >= 0;
      int image_neighbors = 0;
      for (int w : g.neighbors(y)) image_neighbors += used[w];
      return assigned_neighbors == image_neighbors;
    };
    auto rec = [&](auto&& self, std::size_t k) -> bool {
      if (k == order.size()) return true;
      if (++nodes > node_limit) {
        aborted = true;
        return false;
      }
      int x = order[k];
      if (k == 0) {
        if (!consistent(x, v)) return false;
        image[x] = v;
        used[v] = 1;
        if (self(self, k + 1)) return true;
        image[x] = -1;
        used[v] = 0;
        return false;
      }
      int anchor = -1;
      for (int z : g.neighbors(x)) {
        if (image[z] >= 0) {
          anchor = z;
          break;
        }
      }
      for (int y : g.neighbors(image[anchor])) {
        if (!consistent(x, y)) continue;
        image[x] = y;
        used[y] = 1;
        if (self(self, k + 1)) return true;
        image[x] = -1;
        used[y] = 0;
        if (aborted) return false;
      }
      return false;
    };
    bool found = rec(rec, 0);
    if (aborted) return std::nullopt;
    return found;
  };

  std::vector<int> image;
  std::vector<int> tried(static_cast<std::size_t>(n), -1);
  for (int v = 1; v < n; ++v) {
    for (int u = 0; u < v; ++u) {
      int root = find(u);
      if (root == find(v)) break;
      if (tried[root] == v) continue;
      tried[root] = v;
      auto r = try_map(u, v, image);
      if (!r) return std::nullopt;
      if (*r) {
        for (int x = 0; x < n; ++x) parent[find(x)] = find(image[x]);
        break;
      }
    }
  }
  std::vector<int> label(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) label[x] = find(x);
  return label;
}

}  // namespace mlqls
