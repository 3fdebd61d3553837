#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace auctionlab {

// Absolute tolerance for all welfare/payment comparisons. Fixture arithmetic
// and generated instances (2-decimal values) stay exact well inside this.
inline constexpr double kTol = 1e-9;

using AgentId = std::string;

// Reserved id of the seller; never appears in the agent table.
inline const AgentId kSellerId = "s";

class MarketError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class AgentKind { Intermediary, Buyer };

struct AgentRecord {
  AgentId id;
  AgentKind kind = AgentKind::Buyer;
  std::set<AgentId> true_neighbors;  // intermediaries only
  double true_value = 0.0;           // buyers only
};

// Unordered adjacent pair; edge costs are read symmetrically.
using EdgeKey = std::pair<AgentId, AgentId>;

inline EdgeKey make_edge(const AgentId& a, const AgentId& b) {
  return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

// Immutable after build_market(); all operations below are pure functions.
struct Market {
  std::map<AgentId, AgentRecord> agents;
  std::set<AgentId> seller_neighbors;
  std::map<EdgeKey, double> edge_cost;
  int item_count = 1;

  bool has_agent(const AgentId& id) const { return agents.count(id) != 0; }
  bool is_buyer(const AgentId& id) const;
  bool is_intermediary(const AgentId& id) const;
  const AgentRecord& record(const AgentId& id) const;

  // Per-transaction cost of the edge {a, b}; both orders accepted.
  double cost(const AgentId& a, const AgentId& b) const;

  // All undirected edges implied by seller_neighbors and true_neighbors.
  std::set<EdgeKey> all_edges() const;

  // True when the undirected communication graph rooted at the seller is a
  // tree (unique path from s to every agent).
  bool is_tree() const;

  double max_buyer_value() const;
};

// Declared types: a bid per buyer, a neighbor subset per intermediary.
// An agent absent from both maps does not participate (removed agent).
struct ReportProfile {
  std::map<AgentId, double> bids;
  std::map<AgentId, std::set<AgentId>> declared;

  bool contains(const AgentId& id) const {
    return bids.count(id) != 0 || declared.count(id) != 0;
  }
};

Market build_market(const std::vector<AgentRecord>& records,
                    const std::set<AgentId>& seller_neighbors,
                    const std::map<EdgeKey, double>& costs, int item_count);

ReportProfile truthful_profile(const Market& m);

// F(theta'): agents reachable from the seller through declared neighbor
// reports. Buyers never relay.
std::set<AgentId> valid_agents(const Market& m, const ReportProfile& p);

// theta'_{-k}: k's report deleted; downstream reachability is recomputed by
// valid_agents at use sites.
ReportProfile remove_agent(const Market& m, const ReportProfile& p,
                           const AgentId& k);

// Profile identical to p except intermediary i declares `subset`.
ReportProfile restrict_neighbors(const ReportProfile& p, const AgentId& i,
                                 const std::set<AgentId>& subset);

}  // namespace auctionlab
