#include "auctionlab/allocation.hpp"

#include <algorithm>
#include <queue>

namespace auctionlab {

std::set<EdgeKey> Transaction::edges() const {
  std::set<EdgeKey> out;
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    out.insert(make_edge(path[i], path[i + 1]));
  return out;
}

std::set<AgentId> Allocation::nodes() const {
  std::set<AgentId> out;
  for (const auto& t : transactions)
    for (const auto& a : t.path)
      if (a != kSellerId) out.insert(a);
  return out;
}

namespace {

struct Label {
  double dist;
  std::vector<AgentId> path;
};

bool better(const Label& a, const Label& b) {
  if (a.dist + kTol < b.dist) return true;
  if (b.dist + kTol < a.dist) return false;
  return a.path < b.path;
}

// Single-source shortest paths from the seller over the valid subgraph.
// Among equal-cost paths the lexicographically smallest sequence wins; the
// prefix property of that order makes plain Dijkstra with label comparison
// correct under nonnegative weights.
std::map<AgentId, Label> shortest_paths(const Market& m,
                                        const ReportProfile& p) {
  const auto valid = valid_agents(m, p);
  std::map<AgentId, Label> settled;
  auto cmp = [](const std::pair<Label, AgentId>& a,
                const std::pair<Label, AgentId>& b) {
    return better(b.first, a.first);
  };
  std::priority_queue<std::pair<Label, AgentId>,
                      std::vector<std::pair<Label, AgentId>>, decltype(cmp)>
      queue(cmp);

  auto relax = [&](const Label& from, const AgentId& next, double w) {
    if (valid.count(next) == 0 || settled.count(next) != 0) return;
    Label l{from.dist + w, from.path};
    l.path.push_back(next);
    queue.emplace(std::move(l), next);
  };

  Label origin{0.0, {kSellerId}};
  for (const auto& n : m.seller_neighbors) relax(origin, n, m.cost(kSellerId, n));

  while (!queue.empty()) {
    auto [label, node] = queue.top();
    queue.pop();
    if (!settled.emplace(node, label).second) continue;
    if (!m.is_intermediary(node)) continue;  // buyers are sinks
    auto it = p.declared.find(node);
    if (it == p.declared.end()) continue;
    for (const auto& n : it->second) relax(settled.at(node), n, m.cost(node, n));
  }
  return settled;
}

}  // namespace

Transaction cheapest_transaction(const Market& m, const ReportProfile& p,
                                 const AgentId& j) {
  if (!m.is_buyer(j)) throw MarketError(j + " is not a buyer");
  const auto paths = shortest_paths(m, p);
  auto it = paths.find(j);
  if (it == paths.end()) throw MarketError("buyer " + j + " is not valid");
  return Transaction{it->second.path, it->second.dist};
}

WelfareTable welfare_table(const Market& m, const ReportProfile& p) {
  WelfareTable table;
  for (const auto& [id, label] : shortest_paths(m, p)) {
    if (!m.is_buyer(id)) continue;
    table.per_buyer[id] = p.bids.at(id) - label.dist;
    table.path[id] = Transaction{label.path, label.dist};
  }
  return table;
}

Allocation efficient_allocation(const Market& m, const ReportProfile& p) {
  const auto table = welfare_table(m, p);
  std::vector<std::pair<AgentId, double>> ranked(table.per_buyer.begin(),
                                                 table.per_buyer.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second > b.second + kTol) return true;
    if (b.second > a.second + kTol) return false;
    return a.first < b.first;
  });

  Allocation alloc;
  for (const auto& [id, w] : ranked) {
    if (static_cast<int>(alloc.transactions.size()) >= m.item_count) break;
    if (w < -kTol) break;  // strictly negative welfare never wins
    const Transaction& t = table.path.at(id);
    alloc.transactions.push_back(t);
    alloc.winners.insert(id);
    for (std::size_t i = 0; i + 1 < t.path.size(); ++i)
      alloc.graph_edges.insert(make_edge(t.path[i], t.path[i + 1]));
    for (const auto& a : t.path)
      if (a != kSellerId) ++alloc.through_count[a];
  }
  return alloc;
}

double kth_welfare(const Market& m, const ReportProfile& p, int k) {
  if (k < 1) throw MarketError("k must be >= 1");
  std::vector<double> ws;
  for (const auto& [id, w] : welfare_table(m, p).per_buyer) ws.push_back(w);
  if (static_cast<int>(ws.size()) < k) return 0.0;
  std::sort(ws.begin(), ws.end(), std::greater<>());
  return std::max(ws[k - 1], 0.0);
}

double social_welfare(const Allocation& a, const ReportProfile& p) {
  double welfare = 0.0;
  for (const auto& t : a.transactions) welfare += p.bids.at(t.buyer()) - t.cost;
  return welfare;
}

double total_cost(const Allocation& a) {
  double c = 0.0;
  for (const auto& t : a.transactions) c += t.cost;
  return c;
}

double total_cost_by_edges(const Allocation& a, const Market& m) {
  std::map<EdgeKey, int> uses;
  for (const auto& t : a.transactions)
    for (std::size_t i = 0; i + 1 < t.path.size(); ++i)
      ++uses[make_edge(t.path[i], t.path[i + 1])];
  double c = 0.0;
  for (const auto& [e, n] : uses) c += m.cost(e.first, e.second) * n;
  return c;
}

}  // namespace auctionlab
