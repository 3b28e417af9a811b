#include "qfeedback/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qfeedback {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::string_view where,
                         std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
}

double as_real(const json& j, std::string_view what) {
    if (!j.is_number()) throw ConfigError(std::string(what) + " must be a number");
    return j.get<double>();
}

std::uint64_t as_unsigned(const json& j, std::string_view what) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    throw ConfigError(std::string(what) + " must be a nonnegative integer");
}

Complex as_complex(const json& j, std::string_view what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw ConfigError(std::string(what) + " must be a number or [re, im]");
}

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

PureState as_state(const json& j, std::string_view what) {
    if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + " must be an array of amplitudes");
    std::vector<Complex> amps;
    for (const auto& a : j) amps.push_back(as_complex(a, what));
    try {
        return PureState(std::move(amps));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
}

json state_to_json(const PureState& s) {
    json out = json::array();
    for (const auto& a : s.amplitudes()) out.push_back(complex_to_json(a));
    return out;
}

std::vector<std::vector<PureState>> as_bases(const json& j) {
    if (!j.is_array()) throw ConfigError("bases must be an array of bases");
    std::vector<std::vector<PureState>> out;
    for (const auto& basis : j) {
        if (!basis.is_array()) throw ConfigError("each basis must be an array of states");
        std::vector<PureState> vectors;
        for (const auto& v : basis) vectors.push_back(as_state(v, "basis vector"));
        if (!vectors.empty() && !is_orthonormal(vectors)) {
            throw ConfigError("basis vectors are not orthonormal");
        }
        out.push_back(std::move(vectors));
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
}

void apply_noise_section(const json& j, NoiseModel& noise) {
    reject_unknown_keys(j, "noise", {"type", "p"});
    const std::string type = j.value("type", std::string("none"));
    if (type == "none") {
        if (j.contains("p")) throw ConfigError("noise type 'none' takes no p");
        noise = {};
    } else if (type == "depolarizing") {
        if (!j.contains("p")) throw ConfigError("depolarizing noise requires p");
        noise = {NoiseModel::Kind::Depolarizing, as_real(j["p"], "noise.p")};
    } else {
        throw ConfigError("unknown noise type '" + type + "'");
    }
}

}  // namespace

LoopConfig parse_loop_config(std::string_view json_text, std::uint64_t fallback_seed) {
    const json root = parse_json(json_text);
    reject_unknown_keys(root, "config",
                        {"scenario", "initial_alpha", "initial_beta", "target", "cycles", "seed",
                         "noise", "channel", "cloner", "recognizer"});
    for (auto required : {"scenario", "initial_alpha", "initial_beta", "cycles"}) {
        if (!root.contains(required)) throw ConfigError(std::string("missing required key '") + required + "'");
    }

    LoopConfig cfg;
    if (!root["scenario"].is_string()) throw ConfigError("scenario must be a string");
    const auto scenario = parse_scenario(root["scenario"].get<std::string>());
    if (!scenario) throw ConfigError("scenario must be 'teleport' or 'clone'");
    cfg.scenario = *scenario;
    cfg.initial_alpha = as_complex(root["initial_alpha"], "initial_alpha");
    cfg.initial_beta = as_complex(root["initial_beta"], "initial_beta");
    if (root.contains("target")) cfg.target = as_state(root["target"], "target");
    cfg.cycles = as_unsigned(root["cycles"], "cycles");
    cfg.seed = root.contains("seed") ? as_unsigned(root["seed"], "seed") : fallback_seed;

    if (root.contains("noise")) apply_noise_section(root["noise"], cfg.noise);
    if (root.contains("channel")) {
        const json& ch = root["channel"];
        reject_unknown_keys(ch, "channel", {"delay", "drop_probability"});
        if (ch.contains("delay")) cfg.channel.delay = as_unsigned(ch["delay"], "channel.delay");
        if (ch.contains("drop_probability")) {
            cfg.channel.drop_probability = as_real(ch["drop_probability"], "channel.drop_probability");
        }
    }
    if (root.contains("cloner")) {
        const json& cl = root["cloner"];
        reject_unknown_keys(cl, "cloner", {"N", "M"});
        if (cl.contains("N")) cfg.cloner.n_recognizer = as_unsigned(cl["N"], "cloner.N");
        if (cl.contains("M")) cfg.cloner.m_feedback = as_unsigned(cl["M"], "cloner.M");
    }
    if (root.contains("recognizer")) {
        const json& rc = root["recognizer"];
        reject_unknown_keys(rc, "recognizer", {"d0", "mode", "merge_tolerance", "bases"});
        if (rc.contains("d0")) cfg.recognizer.d0 = as_real(rc["d0"], "recognizer.d0");
        if (rc.contains("mode")) {
            const auto mode = rc["mode"].is_string()
                                  ? parse_recognition_mode(rc["mode"].get<std::string>())
                                  : std::nullopt;
            if (!mode) throw ConfigError("recognizer.mode must be 'oracle' or 'measured'");
            cfg.recognizer.mode = *mode;
        }
        if (rc.contains("merge_tolerance")) {
            cfg.recognizer.merge_tolerance = as_real(rc["merge_tolerance"], "recognizer.merge_tolerance");
        }
        if (rc.contains("bases")) cfg.recognizer.bases = as_bases(rc["bases"]);
    }
    validate(cfg);
    return cfg;
}

LoopConfig load_loop_config(const std::filesystem::path& path, std::uint64_t fallback_seed) {
    return parse_loop_config(read_file(path), fallback_seed);
}

std::string loop_config_to_json(const LoopConfig& config) {
    nlohmann::ordered_json j;
    j["scenario"] = std::string(to_string(config.scenario));
    j["initial_alpha"] = complex_to_json(config.initial_alpha);
    j["initial_beta"] = complex_to_json(config.initial_beta);
    j["target"] = state_to_json(config.target);
    j["cycles"] = config.cycles;
    j["seed"] = config.seed;
    if (config.noise.kind == NoiseModel::Kind::None) {
        j["noise"] = {{"type", "none"}};
    } else {
        j["noise"] = {{"type", "depolarizing"}, {"p", config.noise.p}};
    }
    j["channel"] = {{"delay", config.channel.delay},
                    {"drop_probability", config.channel.drop_probability}};
    j["cloner"] = {{"N", config.cloner.n_recognizer}, {"M", config.cloner.m_feedback}};
    nlohmann::ordered_json rc;
    rc["d0"] = config.recognizer.d0;
    rc["mode"] = std::string(to_string(config.recognizer.mode));
    rc["merge_tolerance"] = config.recognizer.merge_tolerance;
    if (!config.recognizer.bases.empty()) {
        json bases = json::array();
        for (const auto& basis : config.recognizer.bases) {
            json b = json::array();
            for (const auto& v : basis) b.push_back(state_to_json(v));
            bases.push_back(std::move(b));
        }
        rc["bases"] = std::move(bases);
    }
    j["recognizer"] = std::move(rc);
    return j.dump(2);
}

StateList parse_state_list(std::string_view json_text) {
    const json root = parse_json(json_text);
    StateList out;
    const json* states = &root;
    if (root.is_object()) {
        reject_unknown_keys(root, "state list", {"states", "bases"});
        if (!root.contains("states")) throw ConfigError("state list object needs 'states'");
        states = &root["states"];
        if (root.contains("bases")) out.bases = as_bases(root["bases"]);
    }
    if (!states->is_array() || states->empty()) throw ConfigError("states must be a non-empty array");
    for (const auto& s : *states) out.states.push_back(as_state(s, "state"));
    if (out.bases.size() > out.states.size()) throw ConfigError("more bases than states");
    return out;
}

StateList load_state_list(const std::filesystem::path& path) {
    return parse_state_list(read_file(path));
}

std::optional<std::uint64_t> seed_from_environment() {
    const char* raw = std::getenv("QFEEDBACK_SEED");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    const std::string_view text(raw);
    std::uint64_t value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw ConfigError("QFEEDBACK_SEED must be an unsigned 64-bit integer");
    }
    return value;
}

}  // namespace qfeedback
