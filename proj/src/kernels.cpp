#include "tropabel/kernels.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tropabel/error.hpp"

namespace tropabel::kernels {

namespace {

VertexSet mask_to_set(std::uint64_t mask) {
  VertexSet s;
  while (mask) {
    s.push_back(static_cast<Index>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return s;
}

// Same order as better(), on bit masks.
bool better_mask(std::int64_t va, std::uint64_t ma, std::int64_t vb, std::uint64_t mb) {
  if (va != vb) return va < vb;
  int ca = std::popcount(ma), cb = std::popcount(mb);
  if (ca != cb) return ca > cb;
  if (ma == mb) return false;
  std::uint64_t low = (ma ^ mb) & (~(ma ^ mb) + 1);
  return (ma & low) != 0;
}

void require_small(const BetaProblem& p) {
  if (p.n >= 63) throw std::invalid_argument("exhaustive subset scan needs fewer than 63 vertices");
}

bool is_violation(std::int64_t value, std::uint64_t mask, Index root) {
  return value < 0 || (value == 0 && ((mask >> root) & 1u));
}

struct Best {
  bool found = false;
  std::int64_t value = 0;
  std::uint64_t mask = 0;
  void offer(std::int64_t v, std::uint64_t m) {
    if (!found || better_mask(v, m, value, mask)) {
      found = true;
      value = v;
      mask = m;
    }
  }
};

// Dinic max-flow with int64 capacities.
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t n) : adj_(n), level_(n), next_(n) {}

  void add_arc(std::size_t u, std::size_t v, std::int64_t cap) {
    adj_[u].push_back(arcs_.size());
    arcs_.push_back({v, cap});
    adj_[v].push_back(arcs_.size());
    arcs_.push_back({u, 0});
  }

  std::int64_t max_flow(std::size_t s, std::size_t t) {
    std::int64_t flow = 0;
    while (bfs(s, t)) {
      std::fill(next_.begin(), next_.end(), 0);
      while (std::int64_t pushed = dfs(s, t, std::numeric_limits<std::int64_t>::max())) flow += pushed;
    }
    return flow;
  }

  // Vertices that can still reach t through residual arcs.
  std::vector<bool> reaches(std::size_t t) const {
    std::vector<bool> seen(adj_.size(), false);
    std::deque<std::size_t> queue{t};
    seen[t] = true;
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t id : adj_[v]) {
        // arc id^1 goes from arcs_[id].to into v
        const Arc& back = arcs_[id ^ 1];
        std::size_t u = arcs_[id].to;
        if (!seen[u] && back.cap > 0) {
          seen[u] = true;
          queue.push_back(u);
        }
      }
    }
    return seen;
  }

  // Vertices reachable from s through residual arcs.
  std::vector<bool> reachable_from(std::size_t s) const {
    std::vector<bool> seen(adj_.size(), false);
    std::deque<std::size_t> queue{s};
    seen[s] = true;
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t id : adj_[v]) {
        const Arc& a = arcs_[id];
        if (!seen[a.to] && a.cap > 0) {
          seen[a.to] = true;
          queue.push_back(a.to);
        }
      }
    }
    return seen;
  }

 private:
  struct Arc {
    std::size_t to;
    std::int64_t cap;
  };

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::deque<std::size_t> queue{s};
    level_[s] = 0;
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t id : adj_[v]) {
        const Arc& a = arcs_[id];
        if (a.cap > 0 && level_[a.to] < 0) {
          level_[a.to] = level_[v] + 1;
          queue.push_back(a.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  std::int64_t dfs(std::size_t v, std::size_t t, std::int64_t limit) {
    if (v == t) return limit;
    for (std::size_t& i = next_[v]; i < adj_[v].size(); ++i) {
      std::size_t id = adj_[v][i];
      Arc& a = arcs_[id];
      if (a.cap <= 0 || level_[a.to] != level_[v] + 1) continue;
      if (std::int64_t got = dfs(a.to, t, std::min(limit, a.cap))) {
        a.cap -= got;
        arcs_[id ^ 1].cap += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

// Maximal (or, with least = true, minimal) minimizer of scaled β subject to
// forced membership constraints.
Candidate constrained_minimizer(const BetaProblem& p, const std::vector<Index>& forced_in,
                                const std::vector<Index>& forced_out, bool least = false) {
  const std::size_t s = p.n, t = p.n + 1;
  std::int64_t total = 1;
  for (auto w : p.weight) total += w < 0 ? -w : w;
  total += p.cut_weight * static_cast<std::int64_t>(p.edges.size()) * 2;
  const std::int64_t inf = total;

  FlowNetwork net(p.n + 2);
  for (Index v = 0; v < p.n; ++v) {
    if (p.weight[v] > 0) net.add_arc(v, t, p.weight[v]);
    if (p.weight[v] < 0) net.add_arc(s, v, -p.weight[v]);
  }
  for (auto [a, b] : p.edges) {
    net.add_arc(a, b, p.cut_weight);
    net.add_arc(b, a, p.cut_weight);
  }
  for (Index v : forced_in) net.add_arc(s, v, inf);
  for (Index v : forced_out) net.add_arc(v, t, inf);
  net.max_flow(s, t);
  Candidate c;
  if (least) {
    auto from_source = net.reachable_from(s);
    for (Index v = 0; v < p.n; ++v)
      if (from_source[v]) c.set.push_back(v);
  } else {
    auto to_sink = net.reaches(t);
    for (Index v = 0; v < p.n; ++v)
      if (!to_sink[v]) c.set.push_back(v);
  }
  c.value = scaled_beta(p, c.set);
  return c;
}

}  // namespace

bool better(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.set.size() != b.set.size()) return a.set.size() > b.set.size();
  return std::lexicographical_compare(a.set.begin(), a.set.end(), b.set.begin(), b.set.end());
}

std::int64_t scaled_beta(const BetaProblem& p, std::uint64_t mask) {
  std::int64_t value = 0;
  for (std::uint64_t m = mask; m; m &= m - 1) value += p.weight[std::countr_zero(m)];
  std::int64_t crossing = 0;
  for (auto [a, b] : p.edges) crossing += ((mask >> a) ^ (mask >> b)) & 1u;
  return value + p.cut_weight * crossing;
}

std::int64_t scaled_beta(const BetaProblem& p, const VertexSet& set) {
  std::vector<bool> in(p.n, false);
  std::int64_t value = 0;
  for (Index v : set) {
    in[v] = true;
    value += p.weight[v];
  }
  std::int64_t crossing = 0;
  for (auto [a, b] : p.edges) crossing += in[a] != in[b];
  return value + p.cut_weight * crossing;
}

std::optional<Candidate> best_violator_serial(const BetaProblem& p) {
  require_small(p);
  if (p.n < 2) return std::nullopt;
  const std::uint64_t full = (std::uint64_t{1} << p.n) - 1;
  Best best;
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    std::int64_t v = scaled_beta(p, mask);
    if (is_violation(v, mask, p.root)) best.offer(v, mask);
  }
  if (!best.found) return std::nullopt;
  return Candidate{mask_to_set(best.mask), best.value};
}

std::optional<Candidate> best_violator_parallel(const BetaProblem& p) {
  require_small(p);
  if (p.n < 2) return std::nullopt;
  const std::int64_t full = (std::int64_t{1} << p.n) - 1;
  Best global;
#pragma omp parallel
  {
    Best local;
#pragma omp for schedule(static)
    for (std::int64_t mask = 1; mask < full; ++mask) {
      auto m = static_cast<std::uint64_t>(mask);
      std::int64_t v = scaled_beta(p, m);
      if (is_violation(v, m, p.root)) local.offer(v, m);
    }
#pragma omp critical(tropabel_best_violator)
    if (local.found) global.offer(local.value, local.mask);
  }
  if (!global.found) return std::nullopt;
  return Candidate{mask_to_set(global.mask), global.value};
}

std::optional<Candidate> best_violator_mincut(const BetaProblem& p) {
  if (p.n < 2) return std::nullopt;
  std::optional<Candidate> best;
  auto offer = [&](Candidate c) {
    if (!best || better(c, *best)) best = std::move(c);
  };
  Candidate a = constrained_minimizer(p, {}, {p.root});
  if (a.value < 0) offer(std::move(a));
  for (Index w = 0; w < p.n; ++w) {
    if (w == p.root) continue;
    Candidate b = constrained_minimizer(p, {p.root}, {w});
    if (b.value <= 0) offer(std::move(b));
  }
  return best;
}

std::optional<Candidate> best_violator(const BetaProblem& p) {
  return p.n <= kExhaustiveLimit ? best_violator_parallel(p) : best_violator_mincut(p);
}

bool no_violator(const BetaProblem& p) {
  if (p.n < 2) return true;
  if (p.n > kExhaustiveLimit) return !best_violator_mincut(p).has_value();
  const std::uint64_t full = (std::uint64_t{1} << p.n) - 1;
  // Singletons and their complements fail most often; try them first.
  for (Index v = 0; v < p.n; ++v) {
    std::uint64_t m = std::uint64_t{1} << v;
    if (is_violation(scaled_beta(p, m), m, p.root)) return false;
    if (is_violation(scaled_beta(p, full ^ m), full ^ m, p.root)) return false;
  }
  for (std::uint64_t mask = 1; mask < full; ++mask)
    if (is_violation(scaled_beta(p, mask), mask, p.root)) return false;
  return true;
}

Candidate minimizer_avoiding_serial(const BetaProblem& p, Index excluded) {
  require_small(p);
  const std::uint64_t full = (std::uint64_t{1} << p.n) - 1;
  const std::uint64_t allowed = full & ~(std::uint64_t{1} << excluded);
  Best best;
  // Enumerate all submasks of `allowed`, including 0.
  std::uint64_t m = allowed;
  while (true) {
    best.offer(scaled_beta(p, m), m);
    if (m == 0) break;
    m = (m - 1) & allowed;
  }
  return Candidate{mask_to_set(best.mask), best.value};
}

Candidate minimizer_avoiding_mincut(const BetaProblem& p, Index excluded) {
  return constrained_minimizer(p, {}, {excluded});
}

Candidate minimizer_avoiding(const BetaProblem& p, Index excluded) {
  return p.n <= kExhaustiveLimit ? minimizer_avoiding_serial(p, excluded) : minimizer_avoiding_mincut(p, excluded);
}

Candidate least_minimizer_serial(const BetaProblem& p, const VertexSet& required, Index excluded) {
  require_small(p);
  const std::uint64_t full = (std::uint64_t{1} << p.n) - 1;
  std::uint64_t req = 0;
  for (Index v : required) req |= std::uint64_t{1} << v;
  if (req & (std::uint64_t{1} << excluded)) throw std::invalid_argument("required vertex is excluded");
  const std::uint64_t free = full & ~req & ~(std::uint64_t{1} << excluded);
  std::optional<std::int64_t> best_value;
  std::uint64_t best_mask = 0;
  std::uint64_t m = free;
  while (true) {
    const std::uint64_t mask = m | req;
    const std::int64_t value = scaled_beta(p, mask);
    const int size = std::popcount(mask), best_size = std::popcount(best_mask);
    if (!best_value || value < *best_value || (value == *best_value && (size < best_size || (size == best_size && mask < best_mask)))) {
      best_value = value;
      best_mask = mask;
    }
    if (m == 0) break;
    m = (m - 1) & free;
  }
  return Candidate{mask_to_set(best_mask), *best_value};
}

Candidate least_minimizer_mincut(const BetaProblem& p, const VertexSet& required, Index excluded) {
  return constrained_minimizer(p, required, {excluded}, true);
}

Candidate least_minimizer(const BetaProblem& p, const VertexSet& required, Index excluded) {
  return p.n <= kExhaustiveLimit ? least_minimizer_serial(p, required, excluded)
                                 : least_minimizer_mincut(p, required, excluded);
}

namespace {

struct OracleWorker {
  const OracleProblem& p;
  BetaProblem local;
  std::vector<Index> free_vertices;
  std::vector<std::int64_t> m;
  std::int64_t radix;

  explicit OracleWorker(const OracleProblem& prob) : p(prob), local(prob.base), m(prob.base.n, 0) {
    for (Index v = 0; v < p.base.n; ++v)
      if (v != p.base.root) free_vertices.push_back(v);
    radix = 2 * p.bound + 1;
  }

  // Decodes k (least significant digit = first free vertex) and tests it.
  bool test(std::int64_t k) {
    for (Index v : free_vertices) {
      m[v] = k % radix - p.bound;
      k /= radix;
    }
    const std::int64_t scale = 2 * p.base.cut_weight;
    for (Index v = 0; v < p.base.n; ++v) {
      std::int64_t lm = 0;
      for (Index w = 0; w < p.base.n; ++w) lm += p.laplacian[v][w] * m[w];
      local.weight[v] = p.base.weight[v] + scale * lm;
    }
    return no_violator(local);
  }
};

std::int64_t oracle_total(const OracleProblem& p) {
  if (p.base.n > kExhaustiveLimit) throw std::invalid_argument("oracle scan is limited to small graphs");
  std::int64_t total = 1;
  for (std::size_t i = 1; i < p.base.n; ++i) {
    if (total > std::numeric_limits<std::int64_t>::max() / (2 * p.bound + 1))
      throw std::invalid_argument("oracle scan box too large");
    total *= 2 * p.bound + 1;
  }
  return total;
}

}  // namespace

std::vector<std::vector<std::int64_t>> oracle_scan_serial(const OracleProblem& p) {
  const std::int64_t total = oracle_total(p);
  OracleWorker w(p);
  std::vector<std::vector<std::int64_t>> found;
  for (std::int64_t k = 0; k < total; ++k)
    if (w.test(k)) found.push_back(w.m);
  return found;
}

std::vector<std::vector<std::int64_t>> oracle_scan_parallel(const OracleProblem& p) {
  const std::int64_t total = oracle_total(p);
  std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>> hits;
#pragma omp parallel
  {
    OracleWorker w(p);
    std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>> local;
#pragma omp for schedule(static)
    for (std::int64_t k = 0; k < total; ++k)
      if (w.test(k)) local.emplace_back(k, w.m);
#pragma omp critical(tropabel_oracle)
    hits.insert(hits.end(), local.begin(), local.end());
  }
  std::sort(hits.begin(), hits.end());
  std::vector<std::vector<std::int64_t>> found;
  for (auto& h : hits) found.push_back(std::move(h.second));
  return found;
}

namespace {

std::uint64_t sweep_total(const SeparableSweep& s) {
  std::uint64_t total = 1;
  for (std::size_t e = 0; e < s.edges; ++e) {
    if (total > std::numeric_limits<std::uint64_t>::max() / std::max<std::size_t>(s.choices, 1))
      throw std::invalid_argument("sweep too large");
    total *= s.choices;
  }
  return total;
}

bool sweep_violates(const SeparableSweep& s, std::size_t row, std::uint64_t k) {
  std::int64_t value = s.base[row];
  for (std::size_t e = 0; e < s.edges; ++e) {
    value += s.term[row][e][k % s.choices];
    k /= s.choices;
  }
  return !(s.lo[row] < value && value <= s.hi[row]);
}

}  // namespace

std::vector<std::uint64_t> sweep_serial(const SeparableSweep& s) {
  const std::uint64_t total = sweep_total(s);
  std::vector<std::uint64_t> bad(s.base.size(), 0);
  for (std::size_t r = 0; r < s.base.size(); ++r)
    for (std::uint64_t k = 0; k < total; ++k) bad[r] += sweep_violates(s, r, k);
  return bad;
}

std::vector<std::uint64_t> sweep_parallel(const SeparableSweep& s) {
  const auto total = static_cast<std::int64_t>(sweep_total(s));
  std::vector<std::uint64_t> bad(s.base.size(), 0);
  for (std::size_t r = 0; r < s.base.size(); ++r) {
    std::uint64_t count = 0;
#pragma omp parallel for reduction(+ : count) schedule(static)
    for (std::int64_t k = 0; k < total; ++k) count += sweep_violates(s, r, static_cast<std::uint64_t>(k));
    bad[r] = count;
  }
  return bad;
}

std::vector<std::vector<std::int64_t>> oracle_scan_pruned(const OracleProblem& p) {
  oracle_total(p);
  const std::size_t n = p.base.n;
  const Index root = p.base.root;
  const std::int64_t scale = 2 * p.base.cut_weight;
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;

  // BFS order of the free vertices; stage[i] lists the vertices whose closed
  // neighbourhood is fully assigned once order[i] is.
  std::vector<Index> order;
  std::vector<int> pos(n, -1);
  std::vector<bool> seen(n, false);
  std::deque<Index> queue{root};
  seen[root] = true;
  while (!queue.empty()) {
    const Index v = queue.front();
    queue.pop_front();
    if (v != root) {
      pos[v] = static_cast<int>(order.size());
      order.push_back(v);
    }
    for (Index w = 0; w < n; ++w)
      if (w != v && p.laplacian[v][w] != 0 && !seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
  }
  if (order.size() + 1 != n) throw std::invalid_argument("oracle scan needs a connected graph");
  std::vector<std::vector<Index>> stage(order.size());
  for (Index v = 0; v < n && !order.empty(); ++v) {
    int last = pos[v];
    for (Index w = 0; w < n; ++w)
      if (p.laplacian[v][w] != 0) last = std::max(last, pos[w]);
    stage[static_cast<std::size_t>(std::max(last, 0))].push_back(v);
  }

  std::vector<std::int64_t> m(n, 0);
  BetaProblem local = p.base;
  auto weight_at = [&](Index v) {
    std::int64_t lm = 0;
    for (Index w = 0; w < n; ++w) lm += p.laplacian[v][w] * m[w];
    return p.base.weight[v] + scale * lm;
  };
  auto singleton_ok = [&](Index v) {
    local.weight[v] = weight_at(v);
    const std::uint64_t bit = std::uint64_t{1} << v;
    std::int64_t total = 0;
    for (auto x : p.base.weight) total += x;  // Δ(M) has degree 0
    const std::int64_t cut = scaled_beta(local, bit) - local.weight[v];
    return !is_violation(local.weight[v] + cut, bit, root) &&
           !is_violation(total - local.weight[v] + cut, full ^ bit, root);
  };

  std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>> hits;
  const std::int64_t radix = 2 * p.bound + 1;
  auto index_of = [&] {
    std::int64_t k = 0;
    for (Index v = n; v-- > 0;)
      if (v != root) k = k * radix + (m[v] + p.bound);
    return k;
  };
  auto dfs = [&](auto&& self, std::size_t i) -> void {
    if (i == order.size()) {
      for (Index v = 0; v < n; ++v) local.weight[v] = weight_at(v);
      if (no_violator(local)) hits.emplace_back(index_of(), m);
      return;
    }
    const Index v = order[i];
    for (std::int64_t x = -p.bound; x <= p.bound; ++x) {
      m[v] = x;
      bool alive = true;
      for (Index w : stage[i])
        if (n > 1 && !singleton_ok(w)) {
          alive = false;
          break;
        }
      if (alive) self(self, i + 1);
    }
    m[v] = 0;
  };
  dfs(dfs, 0);
  std::sort(hits.begin(), hits.end());
  std::vector<std::vector<std::int64_t>> found;
  for (auto& h : hits) found.push_back(std::move(h.second));
  return found;
}

}  // namespace tropabel::kernels
