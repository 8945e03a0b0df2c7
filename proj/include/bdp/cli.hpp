#pragma once

#include <iosfwd>

#include "bdp/config.hpp"

namespace bdp {

/// Runs a validated plan, writing artifacts under plan.out_dir.
/// Exit status: 0 completed/pass, 2 fail verdict, 3 inconclusive, 1 error.
int run_plan(const ExperimentPlan& plan, std::ostream& out, std::ostream& err);

}  // namespace bdp
