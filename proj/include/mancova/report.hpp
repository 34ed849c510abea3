#ifndef MANCOVA_REPORT_HPP
#define MANCOVA_REPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "mancova/simulation.hpp"

namespace mancova {

// One row per (scenario, delta, method). Columns:
// scenario,delta,method,n_sim,n_boot,alpha,flavor,seed,rejections,failures,
// proportion,mc_se,runtime_seconds. Proportion is empty when every
// replicate failed (the study's tables print "-" there).
void write_report_csv(std::ostream& out,
                      const std::vector<SimulationReport>& reports);

// JSON mirror with schema_version and the fully resolved configuration so
// a report is sufficient to reproduce itself bit-for-bit.
std::string report_json(const std::vector<SimulationReport>& reports);

void save_reports(const std::vector<SimulationReport>& reports,
                  const std::string& out_prefix);

}  // namespace mancova

#endif  // MANCOVA_REPORT_HPP
