#pragma once

#include "auctionlab/allocation.hpp"

namespace auctionlab {

enum class Mechanism {
  Vcg,
  Cna,
  VcgWi,
  // Negative controls for the verification suites.
  FirstPrice,    // efficient allocation, winners pay their own bid
  ConstantPay,   // buyers as VCG, every valid intermediary is paid 1
  ChargeLosers,  // winners as VCG, every valid losing buyer is charged 1
};

std::string mechanism_name(Mechanism mech);
std::optional<Mechanism> mechanism_from_name(const std::string& name);

struct MechanismOutcome {
  Mechanism mechanism = Mechanism::Vcg;
  Allocation allocation;
  std::map<AgentId, double> payments;   // x_k; negative = seller pays agent
  std::map<AgentId, double> utilities;  // against true types
  double welfare = 0.0;
  double cost = 0.0;
  double revenue = 0.0;  // sum of payments - cost
};

// r~_i: declared neighbors inside the efficient allocation graph, plus all
// declared intermediary neighbors.
struct CriticalNeighborhood {
  AgentId owner;
  std::set<AgentId> members;
};

CriticalNeighborhood critical_neighborhood(const Market& m,
                                           const ReportProfile& p,
                                           const AgentId& i);

MechanismOutcome run_vcg(const Market& m, const ReportProfile& p);
MechanismOutcome run_cna(const Market& m, const ReportProfile& p);
MechanismOutcome run_vcg_wi(const Market& m, const ReportProfile& p);
MechanismOutcome run_mechanism(const Market& m, const ReportProfile& p,
                               Mechanism mech);

// Simplified winner payment W^(K)(theta'_{-j}) + C(T*_j); must agree with the
// generic VCG payment for j.
double vcg_winner_payment(const Market& m, const ReportProfile& p,
                          const AgentId& j);

// Single-agent payment/utility without evaluating everyone else; used by the
// exhaustive deviation sweeps.
double agent_payment(const Market& m, const ReportProfile& p, const AgentId& k,
                     Mechanism mech);
double agent_utility(const Market& m, const ReportProfile& p, const AgentId& k,
                     Mechanism mech);

struct SummaryRow {
  std::string mechanism;
  double welfare = 0.0;
  double revenue = 0.0;
  double buyer_payments = 0.0;
  double intermediary_payments = 0.0;
  double cost = 0.0;
};

std::vector<SummaryRow> outcome_summary(
    const Market& m, const std::vector<MechanismOutcome>& outcomes);

}  // namespace auctionlab
