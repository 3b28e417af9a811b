#include "qfeedback/trajectory_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qfeedback {

namespace {

// Round-trips through the 9-digit text form so JSON numbers carry exactly
// the digits the CSV shows.
double rounded(double value) { return std::strtod(format_real(value).c_str(), nullptr); }

}  // namespace

std::optional<TrajectoryFormat> parse_trajectory_format(std::string_view name) {
    if (name == "csv") return TrajectoryFormat::Csv;
    if (name == "json") return TrajectoryFormat::Json;
    return std::nullopt;
}

std::string format_real(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

void write_trajectory_csv(std::span<const TrajectoryRecord> records, std::ostream& out) {
    out << kTrajectoryCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.cycle << ',' << format_real(r.fidelity_to_target) << ',';
        if (r.bell_outcome) out << to_string(*r.bell_outcome);
        out << ',';
        if (r.recognizer_max_distance) out << format_real(*r.recognizer_max_distance);
        out << ',';
        if (r.gate_signal) out << to_string(*r.gate_signal);
        out << ',' << (r.actuator_applied ? "true" : "false") << '\n';
    }
}

void write_trajectory_json(std::span<const TrajectoryRecord> records, std::ostream& out) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["cycle"] = r.cycle;
        j["fidelity_to_target"] = rounded(r.fidelity_to_target);
        j["bell_outcome"] = r.bell_outcome ? nlohmann::ordered_json(std::string(to_string(*r.bell_outcome)))
                                           : nlohmann::ordered_json(nullptr);
        j["max_distance"] = r.recognizer_max_distance
                                ? nlohmann::ordered_json(rounded(*r.recognizer_max_distance))
                                : nlohmann::ordered_json(nullptr);
        j["gate_signal"] = r.gate_signal ? nlohmann::ordered_json(std::string(to_string(*r.gate_signal)))
                                         : nlohmann::ordered_json(nullptr);
        j["actuator_applied"] = r.actuator_applied;
        arr.push_back(std::move(j));
    }
    out << arr.dump(2) << '\n';
}

std::string trajectory_to_string(std::span<const TrajectoryRecord> records, TrajectoryFormat format) {
    std::ostringstream ss;
    if (format == TrajectoryFormat::Csv) {
        write_trajectory_csv(records, ss);
    } else {
        write_trajectory_json(records, ss);
    }
    return ss.str();
}

void export_trajectory(std::span<const TrajectoryRecord> records, TrajectoryFormat format,
                       const std::filesystem::path& path) {
    if (records.empty()) throw std::invalid_argument("export_trajectory: no records");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << trajectory_to_string(records, format);
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::vector<TrajectoryRecord> parse_trajectory_json(std::string_view text) {
    const auto arr = nlohmann::json::parse(text);
    if (!arr.is_array()) throw std::invalid_argument("trajectory JSON must be an array");
    std::vector<TrajectoryRecord> out;
    for (const auto& j : arr) {
        TrajectoryRecord r;
        r.cycle = j.at("cycle").get<std::uint64_t>();
        r.fidelity_to_target = j.at("fidelity_to_target").get<double>();
        if (const auto& b = j.at("bell_outcome"); !b.is_null()) {
            r.bell_outcome = parse_bell_outcome(b.get<std::string>());
            if (!r.bell_outcome) throw std::invalid_argument("unknown bell_outcome");
        }
        if (const auto& d = j.at("max_distance"); !d.is_null()) r.recognizer_max_distance = d.get<double>();
        if (const auto& g = j.at("gate_signal"); !g.is_null()) {
            r.gate_signal = parse_gate_signal(g.get<std::string>());
            if (!r.gate_signal) throw std::invalid_argument("unknown gate_signal");
        }
        r.actuator_applied = j.at("actuator_applied").get<bool>();
        out.push_back(r);
    }
    return out;
}

}  // namespace qfeedback
