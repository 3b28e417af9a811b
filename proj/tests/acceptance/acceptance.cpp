// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Tolerances are pinned here and printed next to the observed value.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qfeedback/cloner.hpp"
#include "qfeedback/loop.hpp"
#include "qfeedback/recognizer.hpp"
#include "qfeedback/teleport.hpp"

#ifndef QFEEDBACK_CLI_PATH
#error "QFEEDBACK_CLI_PATH must point at the qfeedback executable"
#endif

using namespace qfeedback;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string shell_quote(const std::string& s) { return "'" + s + "'"; }

std::string capture(const std::string& cmd, int& status) {
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        status = -1;
        return out;
    }
    std::array<char, 512> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) out += buf.data();
    status = pclose(pipe);
    return out;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<PureState> z_basis() { return {PureState::up(), PureState::down()}; }

RecognitionReport recognize_states(const std::vector<PureState>& states, double d0) {
    RecognizerOptions opt;
    opt.d0 = d0;
    return gate_signal(states, opt);
}

Outcome teleport_exactness() {
    const auto t0 = std::chrono::steady_clock::now();
    RngStream rng(1001);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto psi = haar_random_state(1, rng);
        for (auto o : kBellOutcomes) {
            ClassicalChannel channel;
            worst = std::max(worst, std::abs(1.0 - teleport(psi, channel, rng, o).fidelity_to_input));
        }
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-12 && secs < 1.0,
            "max|1-F| = " + sci(worst) + " (tol 1e-12), " + sci(secs) + " s (limit 1 s)"};
}

Outcome bell_uniformity() {
    const auto t0 = std::chrono::steady_clock::now();
    RngStream rng(1002);
    const auto psi = haar_random_state(1, rng);
    std::array<int, 4> counts{};
    const int n = 40000;
    for (int i = 0; i < n; ++i) {
        ClassicalChannel channel;
        ++counts[static_cast<std::size_t>(teleport(psi, channel, rng).outcome)];
    }
    const double secs = seconds_since(t0);
    bool ok = secs < 2.0;
    std::string freqs;
    for (std::size_t k = 0; k < 4; ++k) {
        const double f = counts[k] / static_cast<double>(n);
        ok = ok && f >= 0.24 && f <= 0.26;
        freqs += std::string(k ? ", " : "") + std::string(to_string(kBellOutcomes[k])) + "=" + sci(f);
    }
    return {ok, freqs + " (range [0.24, 0.26]), " + sci(secs) + " s (limit 2 s)"};
}

Outcome post_cnot_state() {
    const auto trace = feedback_process(PureState({0.6, 0.8}));
    const std::vector<Complex> expected{0.6, 0.0, 0.0, 0.8};
    const double diff = max_abs_diff(trace.entangled.amplitudes(), expected);
    return {diff <= 1e-12, "max|Δamp| = " + sci(diff) + " (tol 1e-12)"};
}

Outcome cloner_fidelity() {
    const auto t0 = std::chrono::steady_clock::now();
    RngStream rng(1004);
    double worst = 0.0;
    for (std::size_t k = 2; k <= 6; ++k) {
        const UniversalCloner cloner(k);
        const double analytic = (2.0 * k + 1.0) / (3.0 * k);
        for (int i = 0; i < 100; ++i) {
            const auto psi = haar_random_state(1, rng);
            const auto batch = cloner.clone(psi);
            for (const auto& c : batch.copies) worst = std::max(worst, std::abs(fidelity(psi, c) - analytic));
        }
    }

    // Monte-Carlo estimate through the CLI, as a user would run it.
    double worst_mc = 0.0;
    bool cli_ok = true;
    for (std::size_t k = 2; k <= 6; ++k) {
        int status = 0;
        const std::string out = capture(shell_quote(QFEEDBACK_CLI_PATH) + " clone-fidelity --k " +
                                            std::to_string(k) + " --samples 10000 --seed 4",
                                        status);
        const auto pos = out.find("\"measured\":");
        double measured = 0.0;
        if (status != 0 || pos == std::string::npos ||
            std::sscanf(out.c_str() + pos + 11, "%lf", &measured) != 1) {
            cli_ok = false;
            continue;
        }
        worst_mc = std::max(worst_mc, std::abs(measured - (2.0 * k + 1.0) / (3.0 * k)));
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-9 && cli_ok && worst_mc <= 1e-3 && secs < 10.0,
            "exact max|ΔF| = " + sci(worst) + " (tol 1e-9), Monte-Carlo max|ΔF| = " + sci(worst_mc) +
                " (tol 1e-3)" + (cli_ok ? "" : " [CLI invocation failed]") + ", " + sci(secs) +
                " s (limit 10 s)"};
}

Outcome bloch_shrink() {
    RngStream rng(1005);
    double worst = 0.0;
    for (std::size_t k = 2; k <= 6; ++k) {
        const double eta = (k + 2.0) / (3.0 * k);
        for (int i = 0; i < 100; ++i) {
            const auto psi = haar_random_state(1, rng);
            const auto in = bloch_vector(psi);
            for (const auto& c : clone(psi, k).copies) {
                const auto out = bloch_vector(c);
                worst = std::max({worst, std::abs(out.x - eta * in.x), std::abs(out.y - eta * in.y),
                                  std::abs(out.z - eta * in.z)});
            }
        }
    }
    return {worst <= 1e-9, "max componentwise error = " + sci(worst) + " (tol 1e-9)"};
}

Outcome no_cloning() {
    const double w = no_cloning_witness(PureState::up(), PureState::plus());
    const double expected = std::abs(std::numbers::sqrt2 / 2.0 - 0.5);
    const double same = no_cloning_witness(PureState::plus(), PureState::plus());
    const double orth = no_cloning_witness(PureState::up(), PureState::down());
    const bool ok = std::abs(w - expected) <= 1e-12 && same <= 1e-12 && orth <= 1e-12;
    return {ok, "W(up,+) = " + sci(w) + ", W(+,+) = " + sci(same) + ", W(up,down) = " + sci(orth) +
                    " (tol 1e-12)"};
}

Outcome state_distance_semantics() {
    RngStream rng(1007);
    double identical = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto s = haar_random_state(1, rng);
        for (double d : recognize_states({s, s, s}, 0.1).distances) identical = std::max(identical, d);
    }

    const auto ud = recognize_states({PureState::up(), PureState::down()}, 0.5);
    double ud_err = 0.0;
    for (double d : ud.distances) ud_err = std::max(ud_err, std::abs(d - std::sqrt(0.5)));

    double perm_err = 0.0;
    double min_d = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 6);
        std::vector<PureState> states;
        for (std::size_t i = 0; i < n; ++i) states.push_back(haar_random_state(1, rng));
        auto a = recognize_states(states, 0.1).distances;
        std::rotate(states.begin(), states.begin() + 1, states.end());
        std::reverse(states.begin(), states.end());
        auto b = recognize_states(states, 0.1).distances;
        for (double d : a) min_d = std::min(min_d, d);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        for (std::size_t i = 0; i < n; ++i) perm_err = std::max(perm_err, std::abs(a[i] - b[i]));
    }
    const bool ok = identical <= 1e-12 && ud_err <= 1e-12 && perm_err <= 1e-12 && min_d >= 0.0;
    return {ok, "identical max d = " + sci(identical) + ", |d - sqrt(0.5)| = " + sci(ud_err) +
                    ", permutation max|Δd| = " + sci(perm_err) + " (tol 1e-12), min d = " + sci(min_d)};
}

Outcome gate_semantics() {
    const std::vector<PureState> ud{PureState::up(), PureState::down()};
    const bool off = recognize_states(ud, 0.5).signal == GateSignal::Off;
    const bool on = recognize_states(ud, 0.8).signal == GateSignal::On;

    RngStream rng(1008);
    bool monotone = true;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<PureState> states{haar_random_state(1, rng), haar_random_state(1, rng)};
        if (trial == 0) states = ud;
        bool seen_on = false;
        for (int i = 1; i <= 100; ++i) {
            const bool now_on = recognize_states(states, 0.015 * i).signal == GateSignal::On;
            monotone = monotone && !(seen_on && !now_on);
            seen_on = seen_on || now_on;
        }
    }
    return {off && on && monotone, std::string("d0=0.5 -> ") + (off ? "Off" : "On") + ", d0=0.8 -> " +
                                       (on ? "On" : "Off") + ", 100-point sweep monotone: " +
                                       (monotone ? "yes" : "no")};
}

Outcome closed_loop_convergence() {
    RngStream rng(1009);
    double worst_teleport = 1.0;
    double worst_clone = 1.0;
    for (int i = 0; i < 100; ++i) {
        const auto psi = haar_random_state(1, rng);
        LoopConfig cfg;
        cfg.initial_alpha = psi.amplitude(0);
        cfg.initial_beta = psi.amplitude(1);
        cfg.cycles = 1;
        cfg.seed = static_cast<std::uint64_t>(i);
        cfg.scenario = Scenario::Teleport;
        worst_teleport = std::min(worst_teleport, run_teleport_loop(cfg).front().fidelity_to_target);
        cfg.scenario = Scenario::Clone;
        cfg.recognizer.mode = RecognitionMode::Oracle;
        worst_clone = std::min(worst_clone, run_clone_loop(cfg).front().fidelity_to_target);
    }
    const double floor = 1.0 - 1e-9;
    return {worst_teleport >= floor && worst_clone >= floor,
            "min cycle-1 fidelity: teleport " + sci(1.0 - worst_teleport) + " below 1, clone " +
                sci(1.0 - worst_clone) + " below 1 (tol 1e-9)"};
}

Outcome determinism() {
    const auto dir = std::filesystem::temp_directory_path() / "qfeedback_acceptance";
    std::filesystem::create_directories(dir);
    const auto cfg = dir / "clone.json";
    std::ofstream(cfg) << R"({"scenario": "clone", "initial_alpha": 0.6, "initial_beta": [0.0, 0.8],
  "cycles": 50, "seed": 2718, "noise": {"type": "depolarizing", "p": 0.15},
  "cloner": {"N": 3, "M": 1}, "recognizer": {"d0": 0.5, "mode": "measured"}})";
    const auto a = dir / "a.csv";
    const auto b = dir / "b.csv";
    const std::string base = shell_quote(QFEEDBACK_CLI_PATH) + " clone-loop --config " + shell_quote(cfg.string());
    const int sa = std::system((base + " --out " + shell_quote(a.string())).c_str());
    const int sb = std::system((base + " --out " + shell_quote(b.string())).c_str());
    const std::string ta = slurp(a);
    const std::string tb = slurp(b);
    std::filesystem::remove_all(dir);
    const bool ok = sa == 0 && sb == 0 && !ta.empty() && ta == tb;
    return {ok, "exit codes " + std::to_string(sa) + "/" + std::to_string(sb) + ", " + std::to_string(ta.size()) +
                    " vs " + std::to_string(tb.size()) + " bytes, identical: " + (ta == tb ? "yes" : "no")};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"teleportation exactness", teleport_exactness},
        {"Bell-outcome uniformity", bell_uniformity},
        {"post-CNOT state", post_cnot_state},
        {"cloner fidelity", cloner_fidelity},
        {"Bloch shrink and direction", bloch_shrink},
        {"no-cloning witness", no_cloning},
        {"state-distance", state_distance_semantics},
        {"gate semantics", gate_semantics},
        {"closed-loop convergence", closed_loop_convergence},
        {"determinism", determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome r{false, ""};
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = {false, std::string("threw: ") + e.what()};
        }
        failures += r.pass ? 0 : 1;
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << (i + 1) << ' ' << criteria[i].first << ": " << r.detail
                  << '\n';
    }
    std::cout << (criteria.size() - failures) << '/' << criteria.size() << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}
