#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "fdkp/sweep.hpp"

namespace fdkp {

struct CriterionResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct AcceptanceOptions {
    bool runSweep = true;
    SweepConfig sweep;                   // the desk-scale sweep
    std::filesystem::path outDir;        // sweep artifacts; empty: not written
    Logger log;
};

// One result per acceptance criterion, in a fixed order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

std::string format_result(const CriterionResult& r);

} // namespace fdkp
