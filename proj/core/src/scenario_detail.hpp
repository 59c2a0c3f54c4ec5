#pragma once

#include <string>
#include <vector>

#include "levylab/harness.hpp"

namespace levylab::harness::detail {

JumpLaw parse_law(const std::string& law, const std::string& params);

/// Budget of the experiment; zero marks it skipped.
std::uint64_t budget_of(const Scenario& s, const std::string& experiment);

std::uint64_t derive_seed(std::uint64_t base, const std::string& experiment, std::uint64_t index);

}  // namespace levylab::harness::detail
