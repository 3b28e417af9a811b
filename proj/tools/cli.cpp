#include "cli.hpp"

#include <cmath>
#include <ostream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "qfeedback/cloner.hpp"
#include "qfeedback/config.hpp"
#include "qfeedback/loop.hpp"
#include "qfeedback/recognizer.hpp"
#include "qfeedback/teleport.hpp"
#include "qfeedback/trajectory_io.hpp"

namespace qfeedback::cli {

namespace {

using nlohmann::ordered_json;

double rounded(double v) { return std::stod(format_real(v)); }

ordered_json amplitudes_json(const PureState& s) {
    ordered_json arr = ordered_json::array();
    for (const auto& a : s.amplitudes()) arr.push_back({rounded(a.real()), rounded(a.imag())});
    return arr;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    return seed_from_environment().value_or(0);
}

struct LoopArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string format = "csv";
};

int run_loop(const LoopArgs& args, Scenario expected, std::ostream& out) {
    // Config seed beats the environment; the flag beats both.
    LoopConfig cfg = load_loop_config(args.config_path, seed_from_environment().value_or(0));
    if (args.seed) cfg.seed = *args.seed;
    if (cfg.scenario != expected) {
        throw ConfigError("config scenario is '" + std::string(to_string(cfg.scenario)) +
                          "' but this command runs '" + std::string(to_string(expected)) + "'");
    }
    const auto format = parse_trajectory_format(args.format);
    if (!format) throw ConfigError("--format must be csv or json");

    const auto records = expected == Scenario::Teleport ? run_teleport_loop(cfg) : run_clone_loop(cfg);
    if (args.out_path.empty()) {
        out << trajectory_to_string(records, *format);
    } else {
        export_trajectory(records, *format, args.out_path);
    }
    return kExitOk;
}

struct TeleportArgs {
    double alpha_re = 0.0;
    double alpha_im = 0.0;
    double beta_re = 0.0;
    double beta_im = 0.0;
    std::optional<std::uint64_t> seed;
    std::string outcome;
    std::uint64_t delay = 0;
    double drop = 0.0;
};

int run_teleport_once(const TeleportArgs& args, std::ostream& out) {
    const Complex alpha(args.alpha_re, args.alpha_im);
    const Complex beta(args.beta_re, args.beta_im);
    const double n2 = std::norm(alpha) + std::norm(beta);
    if (std::abs(n2 - 1.0) > kStructuralTol) {
        throw ConfigError("|alpha|^2 + |beta|^2 must equal 1 (got " + format_real(n2) + ")");
    }
    std::optional<BellOutcome> forced;
    if (!args.outcome.empty()) {
        forced = parse_bell_outcome(args.outcome);
        if (!forced) throw ConfigError("--outcome must be PsiMinus, PsiPlus, PhiMinus or PhiPlus");
    }
    if (!(args.drop >= 0.0 && args.drop <= 1.0)) throw ConfigError("--drop must lie in [0, 1]");

    const PureState input({alpha, beta});
    ClassicalChannel channel(args.delay, args.drop);
    RngStream rng(resolve_seed(args.seed));
    const TeleportReport report = teleport(input, channel, rng, forced);

    ordered_json j;
    j["outcome"] = std::string(to_string(report.outcome));
    j["outcome_probability"] = rounded(report.outcome_probability);
    j["bob_state"] = amplitudes_json(report.bob_state);
    j["fidelity_to_input"] = rounded(report.fidelity_to_input);
    j["delivered"] = report.delivered;
    j["measured_cycle"] = report.measured_cycle;
    j["report_cycle"] = report.report_cycle;
    out << j.dump(2) << '\n';
    return kExitOk;
}

struct CloneFidelityArgs {
    std::size_t k = 2;
    std::size_t samples = 10000;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
};

int run_clone_fidelity(const CloneFidelityArgs& args, std::ostream& out) {
    if (args.k < 2 || args.k > kMaxCopies) throw ConfigError("--k must lie in [2, 8]");
    if (args.samples == 0) throw ConfigError("--samples must be positive");
    const unsigned threads = args.threads == 0 ? std::max(1U, std::thread::hardware_concurrency())
                                               : args.threads;
    const double measured = monte_carlo_clone_fidelity(args.k, args.samples, resolve_seed(args.seed), threads);

    ordered_json j;
    j["k"] = args.k;
    j["samples"] = args.samples;
    j["measured"] = rounded(measured);
    j["analytic"] = rounded(optimal_clone_fidelity(args.k));
    out << j.dump(2) << '\n';
    return kExitOk;
}

struct RecognizeArgs {
    std::string states_path;
    double d0 = 0.0;
    std::string mode = "oracle";
    double merge_tolerance = kDefaultMergeTolerance;
    std::optional<std::uint64_t> seed;
};

int run_recognize(const RecognizeArgs& args, std::ostream& out) {
    const StateList list = load_state_list(args.states_path);
    const auto mode = parse_recognition_mode(args.mode);
    if (!mode) throw ConfigError("--mode must be oracle or measured");
    if (!(args.d0 > 0.0)) throw ConfigError("--d0 must be positive");

    RecognizerOptions options;
    options.d0 = args.d0;
    options.mode = *mode;
    options.merge_tolerance = args.merge_tolerance;
    options.bases = list.bases;
    RngStream rng(resolve_seed(args.seed));
    const RecognitionReport report = gate_signal(list.states, options, &rng);

    ordered_json j;
    ordered_json distances = ordered_json::array();
    for (double d : report.distances) distances.push_back(rounded(d));
    j["distances"] = std::move(distances);
    j["max_distance"] = rounded(report.max_distance);
    j["threshold"] = report.threshold;
    j["signal"] = std::string(to_string(report.signal));
    out << j.dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum feedback-control simulator: teleportation-based and cloning-based loops",
                 "qfeedback"};
    app.require_subcommand(1);

    LoopArgs teleport_loop_args;
    LoopArgs clone_loop_args;
    for (auto [name, args, blurb] :
         {std::tuple{"teleport-loop", &teleport_loop_args, "Run a teleportation feedback scenario"},
          std::tuple{"clone-loop", &clone_loop_args, "Run a cloning/recognition feedback scenario"}}) {
        auto* sub = app.add_subcommand(name, blurb);
        sub->add_option("--config", args->config_path, "Scenario JSON file")->required();
        sub->add_option("--seed", args->seed, "Seed override (beats config and QFEEDBACK_SEED)");
        sub->add_option("--out", args->out_path, "Write the trajectory here instead of stdout");
        sub->add_option("--format", args->format, "csv or json")->capture_default_str();
    }

    TeleportArgs tele;
    auto* once = app.add_subcommand("teleport-once", "Teleport one qubit and print the report");
    once->add_option("--alpha-re", tele.alpha_re, "Re(alpha)");
    once->add_option("--alpha-im", tele.alpha_im, "Im(alpha)");
    once->add_option("--beta-re", tele.beta_re, "Re(beta)");
    once->add_option("--beta-im", tele.beta_im, "Im(beta)");
    once->add_option("--seed", tele.seed, "Seed for the Bell measurement");
    once->add_option("--outcome", tele.outcome, "Force a Bell outcome instead of sampling");
    once->add_option("--delay", tele.delay, "Classical channel delay in cycles");
    once->add_option("--drop", tele.drop, "Probability the outcome message is lost");

    CloneFidelityArgs cf;
    auto* fid = app.add_subcommand("clone-fidelity", "Monte-Carlo per-copy fidelity of the 1->K cloner");
    fid->add_option("--k", cf.k, "Total copies K (2..8)")->required();
    fid->add_option("--samples", cf.samples, "Haar-random inputs")->capture_default_str();
    fid->add_option("--seed", cf.seed, "Sampling seed");
    fid->add_option("--threads", cf.threads, "Worker threads (0 = hardware concurrency)");

    RecognizeArgs rec;
    auto* recognize = app.add_subcommand("recognize", "Run the state recognizer on a JSON state list");
    recognize->add_option("--states", rec.states_path, "JSON file with the copies")->required();
    recognize->add_option("--d0", rec.d0, "State-distance threshold")->required();
    recognize->add_option("--mode", rec.mode, "oracle or measured")->capture_default_str();
    recognize->add_option("--merge-tolerance", rec.merge_tolerance, "Basis merge tolerance");
    recognize->add_option("--seed", rec.seed, "Seed for measured mode");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitConfigError;
    }

    try {
        if (app.got_subcommand("teleport-loop")) return run_loop(teleport_loop_args, Scenario::Teleport, out);
        if (app.got_subcommand("clone-loop")) return run_loop(clone_loop_args, Scenario::Clone, out);
        if (app.got_subcommand(once)) return run_teleport_once(tele, out);
        if (app.got_subcommand(fid)) return run_clone_fidelity(cf, out);
        if (app.got_subcommand(recognize)) return run_recognize(rec, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntimeError;
    }
    err << app.help();
    return kExitConfigError;
}

}  // namespace qfeedback::cli
