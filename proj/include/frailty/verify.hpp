#pragma once

// The acceptance criteria as reusable checks, shared by the CLI `verify`
// command and the acceptance test binary.

#include <cstdint>
#include <string>
#include <vector>

#include "frailty/io.hpp"

namespace frailty::verify {

/// Deliberate defects used to confirm that the checks can fail.
enum class Fault { None, ShiftedSign };

struct Options {
    /// Criterion ids to run; empty runs all.
    std::vector<std::string> only;
    Fault fault = Fault::None;
    std::uint64_t seed = 20240601;
    std::size_t mc_clusters = 1000000;
};

struct Check {
    std::string what;
    double measured = 0.0;
    double tolerance = 0.0;
    /// "<", "<=" or ">": how measured must compare with tolerance.
    std::string relation = "<";
    bool passed = false;
};

struct CriterionResult {
    int number = 0;
    std::string id;
    std::string title;
    double seconds = 0.0;
    double time_limit = 0.0;
    std::vector<Check> checks;
    /// Set when a check threw instead of producing a value.
    std::string error;
    bool passed = false;
};

struct CriterionInfo {
    int number;
    std::string id;
    std::string title;
};

const std::vector<CriterionInfo>& criteria();

/// Unknown ids in options.only raise InvalidConfig.
std::vector<CriterionResult> run(const Options& options);

io::Json to_json(const std::vector<CriterionResult>& results);

/// The worst failing (or, if all pass, the worst) check as one line.
std::string summary_line(const CriterionResult& result);

Fault fault_from_string(const std::string& name);

}  // namespace frailty::verify
