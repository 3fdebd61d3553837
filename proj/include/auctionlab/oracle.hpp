#pragma once

#include "auctionlab/mechanisms.hpp"

namespace auctionlab {

class BoundExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Finite deviation space: a bid grid per buyer and all neighbor subsets per
// intermediary (skipping intermediaries above max_degree).
struct DeviationSpace {
  std::map<AgentId, std::vector<double>> buyer_bid_grid;
  std::map<AgentId, std::vector<std::set<AgentId>>> intermediary_subsets;
  double grid_eps = 1e-3;

  // Default grids: welfare breakpoints +/- eps plus {0, true value}.
  // Mechanism outcomes are piecewise constant in a single bid, so the
  // breakpoints witness any violation the continuous space has.
  static DeviationSpace build(const Market& m, int max_degree = 8,
                              double eps = 1e-3);
};

enum class CheckStatus { Pass, Fail, Inconclusive };

struct Counterexample {
  AgentId agent;
  ReportProfile profile;     // the deviating profile
  double truthful_utility = 0.0;
  double deviating_utility = 0.0;
  std::string description;
};

struct VerificationReport {
  std::string property;
  CheckStatus status = CheckStatus::Pass;
  long trials = 0;
  std::optional<Counterexample> counterexample;
  std::vector<std::string> notes;

  bool passed() const { return status == CheckStatus::Pass; }
};

// Exhaustive-enumeration reference for the allocation engine: all buyer
// subsets of size <= K, each served by a DFS-enumerated cheapest simple path.
Allocation brute_force_allocation(const Market& m, const ReportProfile& p,
                                  int max_buyers = 12);

// Independent of the Dijkstra route: enumerates every simple path.
Transaction brute_force_cheapest_path(const Market& m, const ReportProfile& p,
                                      const AgentId& j);

VerificationReport check_ic(const Market& m, const DeviationSpace& d,
                            Mechanism mech);
VerificationReport check_ir(const Market& m, const DeviationSpace& d,
                            Mechanism mech);
VerificationReport check_value_monotonicity(const Market& m,
                                            const DeviationSpace& d);
VerificationReport check_payment_characterization(const Market& m,
                                                  const DeviationSpace& d,
                                                  Mechanism mech);

// Searches for a profile where full diffusion strictly beats a strict subset
// for every intermediary on a truthful winning path (node of AG*).
VerificationReport check_non_degenerate(const Market& m, Mechanism mech);

// revenue(CNA) >= revenue(VCG) on all graphs; on trees additionally
// revenue(CNA) >= revenue(VCG-WI) >= 0. On non-tree markets the second chain
// is evaluated but a violation is reported as Inconclusive.
VerificationReport check_revenue_chain(const Market& m, const ReportProfile& p);

// Per winning path under CNA: X(T) - C(T) >= W^(K) with the path's first
// agent removed, plus the per-path revenue decomposition identity.
VerificationReport check_lemma1(const Market& m, const ReportProfile& p);

}  // namespace auctionlab
