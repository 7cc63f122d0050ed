#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "coachsim/presets.hpp"

namespace coachsim {

/// Parses the sectioned key-value experiment format ([sim], [cost], repeated
/// [scenario]). Unknown sections or keys are rejected with their line number,
/// as are invariant violations.
ExperimentPreset load_config_text(std::string_view text, const std::string& name = "custom");

/// Same, reading from a file; throws IoError when unreadable.
ExperimentPreset load_config(const std::string& path);

/// Cross product scenario x delta x price pair as ready-to-run configs.
std::vector<SimConfig> expand_configs(const ExperimentPreset& preset);

}  // namespace coachsim
