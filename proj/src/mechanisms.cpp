#include "auctionlab/mechanisms.hpp"

#include <algorithm>

namespace auctionlab {

std::string mechanism_name(Mechanism mech) {
  switch (mech) {
    case Mechanism::Vcg: return "vcg";
    case Mechanism::Cna: return "cna";
    case Mechanism::VcgWi: return "vcg-wi";
    case Mechanism::FirstPrice: return "first-price";
    case Mechanism::ConstantPay: return "constant-pay";
    case Mechanism::ChargeLosers: return "charge-losers";
  }
  return "?";
}

std::optional<Mechanism> mechanism_from_name(const std::string& name) {
  if (name == "vcg") return Mechanism::Vcg;
  if (name == "cna") return Mechanism::Cna;
  if (name == "vcg-wi" || name == "vcgwi") return Mechanism::VcgWi;
  if (name == "first-price") return Mechanism::FirstPrice;
  if (name == "constant-pay") return Mechanism::ConstantPay;
  if (name == "charge-losers") return Mechanism::ChargeLosers;
  return std::nullopt;
}

namespace {

// W*(theta'): welfare of the efficient allocation.
double max_welfare(const Market& m, const ReportProfile& p) {
  return social_welfare(efficient_allocation(m, p), p);
}

double vcg_payment(const Market& m, const ReportProfile& p, const AgentId& k,
                   const Allocation& alloc, double welfare) {
  double contribution =
      alloc.winners.count(k) != 0 ? p.bids.at(k) : 0.0;  // z_k v'_k
  return max_welfare(m, remove_agent(m, p, k)) - (welfare - contribution);
}

double cna_intermediary_payment(const Market& m, const ReportProfile& p,
                                const AgentId& i) {
  const auto critical = critical_neighborhood(m, p, i);
  std::set<AgentId> leftover;
  const auto& declared = p.declared.at(i);
  std::set_difference(declared.begin(), declared.end(),
                      critical.members.begin(), critical.members.end(),
                      std::inserter(leftover, leftover.begin()));
  const int k = m.item_count;
  return kth_welfare(m, remove_agent(m, p, i), k) -
         kth_welfare(m, restrict_neighbors(p, i, leftover), k);
}

struct DirectSale {
  std::vector<AgentId> winners;
  double price = 0.0;  // (K+1)-th highest direct bid, 0 when absent
};

// VCG without intermediaries: only buyers in r_s compete.
DirectSale direct_sale(const Market& m, const ReportProfile& p) {
  std::vector<std::pair<AgentId, double>> direct;
  for (const auto& n : m.seller_neighbors)
    if (m.is_buyer(n) && p.bids.count(n) != 0) direct.emplace_back(n, p.bids.at(n));
  std::sort(direct.begin(), direct.end(), [](const auto& a, const auto& b) {
    if (a.second > b.second + kTol) return true;
    if (b.second > a.second + kTol) return false;
    return a.first < b.first;
  });
  DirectSale sale;
  const int k = m.item_count;
  for (int i = 0; i < k && i < static_cast<int>(direct.size()); ++i)
    sale.winners.push_back(direct[i].first);
  if (static_cast<int>(direct.size()) > k) sale.price = direct[k].second;
  return sale;
}

MechanismOutcome finalize(const Market& m, const ReportProfile& p,
                          MechanismOutcome out) {
  double paid = 0.0;
  for (const auto& [id, x] : out.payments) paid += x;
  out.cost = total_cost(out.allocation);
  out.revenue = paid - out.cost;
  out.welfare = social_welfare(out.allocation, p);
  for (const auto& [id, rec] : m.agents) {
    double x = out.payments.count(id) ? out.payments.at(id) : 0.0;
    if (rec.kind == AgentKind::Intermediary) {
      out.utilities[id] = -x;
    } else {
      double z = out.allocation.winners.count(id) != 0 ? 1.0 : 0.0;
      out.utilities[id] = z * rec.true_value - x;
    }
  }
  return out;
}

}  // namespace

CriticalNeighborhood critical_neighborhood(const Market& m,
                                           const ReportProfile& p,
                                           const AgentId& i) {
  if (!m.is_intermediary(i)) throw MarketError(i + " is not an intermediary");
  if (valid_agents(m, p).count(i) == 0) throw MarketError(i + " is not valid");
  const auto ag_nodes = efficient_allocation(m, p).nodes();
  CriticalNeighborhood out{i, {}};
  for (const auto& n : p.declared.at(i)) {
    if (ag_nodes.count(n) != 0) out.members.insert(n);
    if (m.is_intermediary(n)) out.members.insert(n);
  }
  return out;
}

MechanismOutcome run_vcg(const Market& m, const ReportProfile& p) {
  MechanismOutcome out;
  out.mechanism = Mechanism::Vcg;
  out.allocation = efficient_allocation(m, p);
  const double welfare = social_welfare(out.allocation, p);
  for (const auto& k : valid_agents(m, p))
    out.payments[k] = vcg_payment(m, p, k, out.allocation, welfare);
  return finalize(m, p, std::move(out));
}

MechanismOutcome run_cna(const Market& m, const ReportProfile& p) {
  MechanismOutcome out;
  out.mechanism = Mechanism::Cna;
  out.allocation = efficient_allocation(m, p);
  const double welfare = social_welfare(out.allocation, p);
  for (const auto& k : valid_agents(m, p)) {
    if (m.is_buyer(k))
      out.payments[k] = vcg_payment(m, p, k, out.allocation, welfare);
    else
      out.payments[k] = cna_intermediary_payment(m, p, k);
  }
  return finalize(m, p, std::move(out));
}

MechanismOutcome run_vcg_wi(const Market& m, const ReportProfile& p) {
  MechanismOutcome out;
  out.mechanism = Mechanism::VcgWi;
  const auto sale = direct_sale(m, p);
  for (const auto& j : sale.winners) {
    out.allocation.transactions.push_back(
        Transaction{{kSellerId, j}, m.cost(kSellerId, j)});
    out.allocation.winners.insert(j);
    out.allocation.graph_edges.insert(make_edge(kSellerId, j));
    out.allocation.through_count[j] = 1;
    out.payments[j] = sale.price;
  }
  return finalize(m, p, std::move(out));
}

MechanismOutcome run_mechanism(const Market& m, const ReportProfile& p,
                               Mechanism mech) {
  switch (mech) {
    case Mechanism::Vcg: return run_vcg(m, p);
    case Mechanism::Cna: return run_cna(m, p);
    case Mechanism::VcgWi: return run_vcg_wi(m, p);
    default: break;
  }
  MechanismOutcome out;
  out.mechanism = mech;
  out.allocation = efficient_allocation(m, p);
  const double welfare = social_welfare(out.allocation, p);
  for (const auto& k : valid_agents(m, p)) {
    if (mech == Mechanism::FirstPrice) {
      out.payments[k] = out.allocation.winners.count(k) ? p.bids.at(k) : 0.0;
    } else if (mech == Mechanism::ConstantPay) {
      if (m.is_buyer(k))
        out.payments[k] = vcg_payment(m, p, k, out.allocation, welfare);
      else
        out.payments[k] = -1.0;
    } else {  // ChargeLosers
      if (m.is_buyer(k) && out.allocation.winners.count(k) == 0)
        out.payments[k] = 1.0;
      else if (m.is_buyer(k))
        out.payments[k] = vcg_payment(m, p, k, out.allocation, welfare);
      else
        out.payments[k] = 0.0;
    }
  }
  return finalize(m, p, std::move(out));
}

double vcg_winner_payment(const Market& m, const ReportProfile& p,
                          const AgentId& j) {
  const auto alloc = efficient_allocation(m, p);
  if (alloc.winners.count(j) == 0) throw MarketError(j + " is not a winner");
  double path_cost = 0.0;
  for (const auto& t : alloc.transactions)
    if (t.buyer() == j) path_cost = t.cost;
  return kth_welfare(m, remove_agent(m, p, j), m.item_count) + path_cost;
}

double agent_payment(const Market& m, const ReportProfile& p, const AgentId& k,
                     Mechanism mech) {
  if (valid_agents(m, p).count(k) == 0) return 0.0;
  switch (mech) {
    case Mechanism::Vcg:
      break;
    case Mechanism::Cna:
      if (m.is_intermediary(k)) return cna_intermediary_payment(m, p, k);
      break;
    case Mechanism::VcgWi: {
      const auto sale = direct_sale(m, p);
      bool wins = std::find(sale.winners.begin(), sale.winners.end(), k) !=
                  sale.winners.end();
      return wins ? sale.price : 0.0;
    }
    case Mechanism::FirstPrice: {
      const auto alloc = efficient_allocation(m, p);
      return alloc.winners.count(k) ? p.bids.at(k) : 0.0;
    }
    case Mechanism::ConstantPay:
      if (m.is_intermediary(k)) return -1.0;
      break;
    case Mechanism::ChargeLosers: {
      if (m.is_intermediary(k)) return 0.0;
      if (efficient_allocation(m, p).winners.count(k) == 0) return 1.0;
      break;
    }
  }
  const auto alloc = efficient_allocation(m, p);
  return vcg_payment(m, p, k, alloc, social_welfare(alloc, p));
}

double agent_utility(const Market& m, const ReportProfile& p, const AgentId& k,
                     Mechanism mech) {
  const double x = agent_payment(m, p, k, mech);
  if (m.is_intermediary(k)) return -x;
  bool wins = false;
  if (mech == Mechanism::VcgWi) {
    const auto sale = direct_sale(m, p);
    wins = std::find(sale.winners.begin(), sale.winners.end(), k) !=
           sale.winners.end();
  } else {
    wins = efficient_allocation(m, p).winners.count(k) != 0;
  }
  if (valid_agents(m, p).count(k) == 0) wins = false;
  return (wins ? m.record(k).true_value : 0.0) - x;
}

std::vector<SummaryRow> outcome_summary(
    const Market& m, const std::vector<MechanismOutcome>& outcomes) {
  std::vector<SummaryRow> rows;
  for (const auto& out : outcomes) {
    SummaryRow row;
    row.mechanism = mechanism_name(out.mechanism);
    row.welfare = out.welfare;
    row.revenue = out.revenue;
    row.cost = out.cost;
    for (const auto& [id, x] : out.payments) {
      if (!m.has_agent(id)) throw MarketError("outcome refers to unknown agent " + id);
      if (m.is_buyer(id))
        row.buyer_payments += x;
      else
        row.intermediary_payments += x;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace auctionlab
