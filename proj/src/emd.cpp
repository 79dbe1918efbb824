#include "chartensor/emd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace chartensor {

namespace {

void minmax_normalize(std::vector<double>& v, const char* axis, Diagnostics* diag) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double min = *lo, range = *hi - *lo;
  if (!(range > 0.0)) {
    if (diag) diag->warn(std::string("normalisation: degenerate range on ") + axis);
    std::fill(v.begin(), v.end(), 0.0);
    return;
  }
  for (auto& x : v) x = (x - min) / range;
}

}  // namespace

Distribution1D uniform_distribution(const std::vector<double>& values) {
  Distribution1D d;
  d.values = values;
  std::sort(d.values.begin(), d.values.end());
  d.masses.assign(values.size(), values.empty() ? 0.0 : 1.0 / static_cast<double>(values.size()));
  return d;
}

NormalizedDistribution normalize_table(const DataTable& dt, Diagnostics* diag) {
  if (dt.rows.empty()) fail(ErrorKind::kInvalidInput, "cannot normalise an empty table");
  NormalizedDistribution out;
  if (dt.kind == ChartKind::kScatter) {
    out.dims = 2;
    std::vector<double> xs, ys;
    for (const auto& r : dt.rows) {
      xs.push_back(r.x);
      ys.push_back(r.y);
    }
    minmax_normalize(xs, "x", diag);
    minmax_normalize(ys, "y", diag);
    for (std::size_t i = 0; i < xs.size(); ++i) out.d2.push_back({xs[i], ys[i]});
    return out;
  }
  std::vector<double> heights;
  for (const auto& r : dt.rows) heights.push_back(r.y);
  minmax_normalize(heights, "y", diag);
  out.d1 = uniform_distribution(heights);
  return out;
}

double emd_1d(const Distribution1D& a, const Distribution1D& b) {
  if (a.values.empty() || b.values.empty()) fail(ErrorKind::kInvalidInput, "empty distribution");
  if (a.values.size() != a.masses.size() || b.values.size() != b.masses.size()) {
    fail(ErrorKind::kInvalidInput, "distribution values and masses differ in length");
  }
  struct Atom {
    double v, m;
  };
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < a.values.size(); ++i) atoms.push_back({a.values[i], a.masses[i]});
  for (std::size_t i = 0; i < b.values.size(); ++i) atoms.push_back({b.values[i], -b.masses[i]});
  std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& p, const Atom& q) { return p.v < q.v; });

  double cdf_diff = 0.0, total = 0.0;
  for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
    cdf_diff += atoms[i].m;
    total += std::abs(cdf_diff) * (atoms[i + 1].v - atoms[i].v);
  }
  return total;
}

namespace {

// Successive shortest paths with Johnson potentials on a bipartite transport
// network: source -> A (cap |B|), A -> B (cap inf, cost = distance),
// B -> sink (cap |A|). Integer capacities keep the flow exact.
class MinCostFlow {
 public:
  explicit MinCostFlow(int n) : graph_(n) {}

  void add_edge(int from, int to, long cap, double cost) {
    graph_[from].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({to, cap, cost});
    graph_[to].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({from, 0, -cost});
  }

  double run(int s, int t, long demand) {
    const int n = static_cast<int>(graph_.size());
    std::vector<double> potential(n, 0.0), dist(n);
    std::vector<int> prev_edge(n);
    double cost = 0.0;
    long flow = 0;
    const double inf = std::numeric_limits<double>::infinity();
    while (flow < demand) {
      std::fill(dist.begin(), dist.end(), inf);
      std::fill(prev_edge.begin(), prev_edge.end(), -1);
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      dist[s] = 0.0;
      pq.push({0.0, s});
      while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (int id : graph_[u]) {
          const Edge& e = edges_[id];
          if (e.cap <= 0) continue;
          // Rounding can leave reduced costs marginally negative.
          const double rc = std::max(0.0, e.cost + potential[u] - potential[e.to]);
          if (dist[u] + rc < dist[e.to]) {
            dist[e.to] = dist[u] + rc;
            prev_edge[e.to] = id;
            pq.push({dist[e.to], e.to});
          }
        }
      }
      if (dist[t] == inf) fail(ErrorKind::kInvalidInput, "transport problem infeasible");
      for (int v = 0; v < n; ++v)
        if (dist[v] < inf) potential[v] += dist[v];

      long push = demand - flow;
      for (int v = t; v != s; v = edges_[prev_edge[v] ^ 1].to)
        push = std::min(push, edges_[prev_edge[v]].cap);
      for (int v = t; v != s; v = edges_[prev_edge[v] ^ 1].to) {
        edges_[prev_edge[v]].cap -= push;
        edges_[prev_edge[v] ^ 1].cap += push;
        cost += static_cast<double>(push) * edges_[prev_edge[v]].cost;
      }
      flow += push;
    }
    return cost;
  }

 private:
  struct Edge {
    int to;
    long cap;
    double cost;
  };
  std::vector<std::vector<int>> graph_;
  std::vector<Edge> edges_;
};

}  // namespace

double emd_2d(const std::vector<PointXY>& a, const std::vector<PointXY>& b) {
  if (a.empty() || b.empty()) fail(ErrorKind::kInvalidInput, "empty point set");
  const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
  const int s = na + nb, t = s + 1;
  MinCostFlow mcf(na + nb + 2);
  for (int i = 0; i < na; ++i) mcf.add_edge(s, i, nb, 0.0);
  for (int j = 0; j < nb; ++j) mcf.add_edge(na + j, t, na, 0.0);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      mcf.add_edge(i, na + j, static_cast<long>(na) * nb, std::hypot(a[i].x - b[j].x, a[i].y - b[j].y));
  const long total = static_cast<long>(na) * nb;
  return mcf.run(s, t, total) / static_cast<double>(total);
}

double table_emd(const DataTable& extracted, const DataTable& truth, Diagnostics* diag) {
  const auto a = normalize_table(extracted, diag);
  const auto b = normalize_table(truth, diag);
  if (a.dims != b.dims) fail(ErrorKind::kInvalidInput, "tables differ in dimensionality");
  return a.dims == 1 ? emd_1d(a.d1, b.d1) : emd_2d(a.d2, b.d2);
}

}  // namespace chartensor
