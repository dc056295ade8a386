#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "credal_cert/cli/config.hpp"

namespace credal_cert::cli {

struct SimulationCheck {
    std::string name;
    double measured = 0.0;
    std::string requirement;
    bool passed = false;
};

struct SimulationReport {
    std::string experiment;
    std::size_t trials = 0;
    std::vector<SimulationCheck> checks;

    bool passed() const;
};

SimulationReport run_simulation(const SimulateConfig& cfg);

void print_report(const SimulationReport& report, std::ostream& out);

}  // namespace credal_cert::cli
