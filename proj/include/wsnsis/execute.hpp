#pragma once

#include "wsnsis/config.hpp"

#include <iosfwd>
#include <string_view>

namespace wsnsis {

inline constexpr std::string_view kVersion = "1.0.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Runs one command, writing its CSV (or edge list) and a `.meta` key-value
/// sidecar into spec.out_dir. Progress and results go to `out`, diagnostics to
/// `err`. Returns kExitOk, kExitValidation, or kExitRuntime. Output files are
/// a deterministic function of the spec.
int execute(const ExperimentSpec& spec, std::ostream& out, std::ostream& err);

} // namespace wsnsis
