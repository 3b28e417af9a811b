#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qfeedback/loop.hpp"

namespace qfeedback {

enum class TrajectoryFormat { Csv, Json };

std::optional<TrajectoryFormat> parse_trajectory_format(std::string_view name);

/// Column order shared by both formats.
inline constexpr std::string_view kTrajectoryCsvHeader =
    "cycle,fidelity_to_target,bell_outcome,max_distance,gate_signal,actuator_applied";

/// Reals are written with 9 significant digits ("%.9g").
std::string format_real(double value);

/// Header plus one line per record; inapplicable fields are left empty.
void write_trajectory_csv(std::span<const TrajectoryRecord> records, std::ostream& out);
/// Array of objects keyed by the CSV column names; absent fields are null.
void write_trajectory_json(std::span<const TrajectoryRecord> records, std::ostream& out);

std::string trajectory_to_string(std::span<const TrajectoryRecord> records, TrajectoryFormat format);

/// Writes to path. Throws std::invalid_argument on an empty record list and
/// std::runtime_error when the file cannot be written.
void export_trajectory(std::span<const TrajectoryRecord> records, TrajectoryFormat format,
                       const std::filesystem::path& path);

/// Inverse of write_trajectory_json.
std::vector<TrajectoryRecord> parse_trajectory_json(std::string_view text);

}  // namespace qfeedback
