#pragma once

#include "auctionlab/oracle.hpp"

namespace auctionlab {

enum class ReportFormat { Table, Csv, Structured };

struct RunReport {
  std::string market_digest;
  std::string mechanism;
  double welfare = 0.0;
  double cost = 0.0;
  double revenue = 0.0;

  struct AgentRow {
    AgentId id;
    std::string kind;
    bool valid = false;
    bool winner = false;
    double payment = 0.0;
    double utility = 0.0;
  };
  std::vector<AgentRow> rows;
};

RunReport make_run_report(const Market& m, const ReportProfile& p,
                          const MechanismOutcome& outcome);

std::string render_run_reports(const std::vector<RunReport>& reports,
                               ReportFormat format);
std::string render_summary(const std::vector<SummaryRow>& rows,
                           ReportFormat format);
std::string render_verification(const std::vector<VerificationReport>& reports,
                                ReportFormat format);

}  // namespace auctionlab
