#include "auctionlab/market.hpp"

#include <algorithm>
#include <deque>

namespace auctionlab {

bool Market::is_buyer(const AgentId& id) const {
  auto it = agents.find(id);
  return it != agents.end() && it->second.kind == AgentKind::Buyer;
}

bool Market::is_intermediary(const AgentId& id) const {
  auto it = agents.find(id);
  return it != agents.end() && it->second.kind == AgentKind::Intermediary;
}

const AgentRecord& Market::record(const AgentId& id) const {
  auto it = agents.find(id);
  if (it == agents.end()) throw MarketError("unknown agent id: " + id);
  return it->second;
}

double Market::cost(const AgentId& a, const AgentId& b) const {
  auto it = edge_cost.find(make_edge(a, b));
  if (it == edge_cost.end())
    throw MarketError("no cost entry for edge (" + a + "," + b + ")");
  return it->second;
}

std::set<EdgeKey> Market::all_edges() const {
  std::set<EdgeKey> edges;
  for (const auto& n : seller_neighbors) edges.insert(make_edge(kSellerId, n));
  for (const auto& [id, rec] : agents)
    for (const auto& n : rec.true_neighbors) edges.insert(make_edge(id, n));
  return edges;
}

bool Market::is_tree() const {
  // BFS from the seller over undirected edges; tree iff no node is reached
  // twice and every agent is reached.
  std::map<AgentId, std::vector<AgentId>> adj;
  for (const auto& [a, b] : all_edges()) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::set<AgentId> seen{kSellerId};
  std::deque<std::pair<AgentId, AgentId>> frontier;  // (node, parent)
  frontier.emplace_back(kSellerId, "");
  while (!frontier.empty()) {
    auto [node, parent] = frontier.front();
    frontier.pop_front();
    for (const auto& next : adj[node]) {
      if (next == parent) continue;
      if (!seen.insert(next).second) return false;  // cycle
      frontier.emplace_back(next, node);
    }
  }
  return seen.size() == agents.size() + 1;
}

double Market::max_buyer_value() const {
  double v = 0.0;
  for (const auto& [id, rec] : agents)
    if (rec.kind == AgentKind::Buyer) v = std::max(v, rec.true_value);
  return v;
}

Market build_market(const std::vector<AgentRecord>& records,
                    const std::set<AgentId>& seller_neighbors,
                    const std::map<EdgeKey, double>& costs, int item_count) {
  if (records.empty()) throw MarketError("no agents");
  if (item_count < 1) throw MarketError("item_count must be >= 1");

  Market m;
  m.item_count = item_count;
  m.seller_neighbors = seller_neighbors;
  for (const auto& rec : records) {
    if (rec.id == kSellerId) throw MarketError("agent uses the reserved seller id");
    if (rec.id.empty()) throw MarketError("empty agent id");
    if (!m.agents.emplace(rec.id, rec).second)
      throw MarketError("duplicate agent id: " + rec.id);
  }

  for (const auto& [id, rec] : m.agents) {
    if (rec.kind == AgentKind::Buyer) {
      if (!rec.true_neighbors.empty())
        throw MarketError("buyer " + id + " has a neighbor set");
      if (rec.true_value < 0.0)
        throw MarketError("buyer " + id + " has a negative value");
    } else {
      if (rec.true_value != 0.0)
        throw MarketError("intermediary " + id + " carries a value");
      for (const auto& n : rec.true_neighbors) {
        if (n == id) throw MarketError("agent " + id + " is its own neighbor");
        if (n == kSellerId)
          throw MarketError("agent " + id + " lists the seller as a neighbor");
        if (!m.has_agent(n))
          throw MarketError("agent " + id + " references unknown id " + n);
      }
    }
  }
  for (const auto& n : seller_neighbors)
    if (!m.has_agent(n))
      throw MarketError("seller neighbor references unknown id " + n);

  const auto edges = m.all_edges();
  for (const auto& [key, w] : costs) {
    if (w < 0.0)
      throw MarketError("negative cost on edge (" + key.first + "," +
                        key.second + ")");
    EdgeKey norm = make_edge(key.first, key.second);
    if (edges.count(norm) == 0)
      throw MarketError("cost entry on non-edge (" + key.first + "," +
                        key.second + ")");
    if (!m.edge_cost.emplace(norm, w).second)
      throw MarketError("duplicate cost entry for edge (" + key.first + "," +
                        key.second + ")");
  }
  // Edges without an explicit entry cost nothing; afterwards every adjacent
  // pair has exactly one entry.
  for (const auto& e : edges) m.edge_cost.emplace(e, 0.0);
  return m;
}

ReportProfile truthful_profile(const Market& m) {
  ReportProfile p;
  for (const auto& [id, rec] : m.agents) {
    if (rec.kind == AgentKind::Buyer)
      p.bids[id] = rec.true_value;
    else
      p.declared[id] = rec.true_neighbors;
  }
  return p;
}

std::set<AgentId> valid_agents(const Market& m, const ReportProfile& p) {
  std::set<AgentId> valid;
  std::deque<AgentId> frontier;
  auto visit = [&](const AgentId& id) {
    if (!m.has_agent(id) || !p.contains(id)) return;
    if (!valid.insert(id).second) return;
    if (m.is_intermediary(id)) frontier.push_back(id);
  };
  for (const auto& n : m.seller_neighbors) visit(n);
  while (!frontier.empty()) {
    AgentId i = frontier.front();
    frontier.pop_front();
    auto it = p.declared.find(i);
    if (it == p.declared.end()) continue;
    for (const auto& n : it->second) visit(n);
  }
  return valid;
}

ReportProfile remove_agent(const Market& m, const ReportProfile& p,
                           const AgentId& k) {
  if (k == kSellerId) throw MarketError("cannot remove the seller");
  (void)m.record(k);
  ReportProfile out = p;
  out.bids.erase(k);
  out.declared.erase(k);
  return out;
}

ReportProfile restrict_neighbors(const ReportProfile& p, const AgentId& i,
                                 const std::set<AgentId>& subset) {
  auto it = p.declared.find(i);
  if (it == p.declared.end())
    throw MarketError("no declaration to restrict for " + i);
  if (!std::includes(it->second.begin(), it->second.end(), subset.begin(),
                     subset.end()))
    throw MarketError("subset not contained in current declaration of " + i);
  ReportProfile out = p;
  out.declared[i] = subset;
  return out;
}

}  // namespace auctionlab
