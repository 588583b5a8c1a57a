#pragma once

// Invariant suite behind the `validate` subcommand.

#include "usc/model.hpp"

#include <string>
#include <vector>

namespace usc {

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Runs the property checks at `base` (both parity-conserving and parity-breaking
/// angles where it matters). Each check reports its measured quantity.
std::vector<ValidationCheck> run_validation(const SystemParams &base = {}, int threads = 1);

} // namespace usc
