#pragma once

#include <optional>

#include "auctionlab/market.hpp"

namespace auctionlab {

// A seller-to-buyer path; intermediate entries are intermediaries.
struct Transaction {
  std::vector<AgentId> path;  // starts at the seller, ends at the buyer
  double cost = 0.0;          // sum of edge costs along the path

  const AgentId& buyer() const { return path.back(); }
  std::set<EdgeKey> edges() const;
};

struct Allocation {
  std::vector<Transaction> transactions;
  std::set<AgentId> winners;
  std::set<EdgeKey> graph_edges;             // AG: union of transaction edges
  std::map<AgentId, int> through_count;      // n_k over agents in AG

  // Nodes of the allocation graph, seller excluded.
  std::set<AgentId> nodes() const;
};

struct WelfareTable {
  std::map<AgentId, double> per_buyer;       // W_j = bid - cheapest path cost
  std::map<AgentId, Transaction> path;       // T_j
};

// Minimum-cost simple path from the seller to valid buyer j over declared
// edges; ties broken by lexicographically smallest path sequence.
Transaction cheapest_transaction(const Market& m, const ReportProfile& p,
                                 const AgentId& j);

WelfareTable welfare_table(const Market& m, const ReportProfile& p);

// Top-K buyers by nonnegative welfare, id-order tiebreak.
Allocation efficient_allocation(const Market& m, const ReportProfile& p);

// K-th highest per-buyer welfare, clamped at zero.
double kth_welfare(const Market& m, const ReportProfile& p, int k);

double social_welfare(const Allocation& a, const ReportProfile& p);

double total_cost(const Allocation& a);

// Same quantity computed per edge through w_ik * n_ik; separability check.
double total_cost_by_edges(const Allocation& a, const Market& m);

}  // namespace auctionlab
