#ifndef MANCOVA_SCENARIO_IO_HPP
#define MANCOVA_SCENARIO_IO_HPP

#include <string>

#include "mancova/simulation.hpp"

namespace mancova {

// Key = value scenario files. Vectors are comma separated, matrices use
// ';' between rows (e.g. sigma_1 = 1,0.5; 0.5,1). Unknown keys and missing
// required fields raise ConfigParse naming the field.
ScenarioConfig parse_scenario_file(const std::string& path);
ScenarioConfig parse_scenario_text(const std::string& text,
                                   const std::string& origin);

// Round-trippable rendering of a resolved configuration.
std::string scenario_text(const ScenarioConfig& config);

}  // namespace mancova

#endif  // MANCOVA_SCENARIO_IO_HPP
