// qce command-line front end: estimate | ensemble | interfere | sweep.
// Exit codes: 0 success, 2 usage/validation error, 3 numerical failure.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qce/qce.hpp"

namespace {

using qce::BlochDirection;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string fmt17(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

double parse_double(std::string_view text, const std::string& what) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw UsageError("malformed " + what + ": '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    while (true) {
        const auto pos = s.find(sep);
        parts.push_back(s.substr(0, pos));
        if (pos == std::string_view::npos) break;
        s.remove_prefix(pos + 1);
    }
    return parts;
}

BlochDirection parse_direction(const std::string& text, const std::string& what) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) {
        throw UsageError(what + " must be '<theta>,<phi>' in radians, got '" + text + "'");
    }
    try {
        return BlochDirection(parse_double(parts[0], what + " theta"),
                              parse_double(parts[1], what + " phi"));
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(e.what()));
    }
}

std::pair<BlochDirection, int> parse_preparation(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3 || (parts[2] != "+" && parts[2] != "-")) {
        throw UsageError("--prep must be '<theta>,<phi>,<+|->', got '" + text + "'");
    }
    try {
        return {BlochDirection(parse_double(parts[0], "--prep theta"),
                               parse_double(parts[1], "--prep phi")),
                parts[2] == "+" ? +1 : -1};
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(e.what()));
    }
}

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) {
        throw UsageError("cannot open output file '" + output_path + "'");
    }
    out << text;
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateArgs {
    double sigma_z = 0.0;
    int n_theta = 64;
    int n_phi = 8;
    std::string format = "json";
    std::string output;
};

std::string estimate_csv(const qce::EstimationReport& r) {
    std::string out =
        "sigma_z,lambda,Z,residual,entropy,"
        "rho00_re,rho00_im,rho01_re,rho01_im,rho10_re,rho10_im,rho11_re,rho11_im\n";
    out += fmt17(r.sigma_z) + ',' + fmt17(r.lambda) + ',' + fmt17(r.z) + ',' +
           fmt17(r.residual) + ',' + fmt17(r.entropy);
    for (const qce::Complex& e : r.rho.entries) {
        out += ',' + fmt17(e.real()) + ',' + fmt17(e.imag());
    }
    out += '\n';
    return out;
}

int run_estimate(const EstimateArgs& args) {
    const qce::EstimationReport report =
        qce::estimate_from_mean(args.sigma_z, args.n_theta, args.n_phi);
    emit(args.format == "csv" ? estimate_csv(report) : qce::to_json(report).dump(2) + "\n",
         args.output);
    return 0;
}

// ---------------------------------------------------------------------------
// ensemble

struct EnsembleArgs {
    std::string prep;
    std::string obs;
    std::string obs2;
    bool bell = false;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string output;
};

std::string ensemble_csv(const qce::ConfigurationDistribution& dist,
                         const qce::SampleResult* sampled) {
    std::string out;
    if (sampled != nullptr) {
        out += "# seed=" + std::to_string(sampled->seed) + "\n";
        out += "label,probability,count\n";
    } else {
        out += "label,probability\n";
    }
    for (std::size_t k = 0; k < dist.labels.size(); ++k) {
        out += dist.labels[k] + ',' + fmt17(dist.probabilities[k]);
        if (sampled != nullptr) {
            out += ',' + std::to_string(sampled->counts[k]);
        }
        out += '\n';
    }
    return out;
}

int run_ensemble(const EnsembleArgs& args) {
    if (args.bell && args.obs2.empty()) {
        throw UsageError("--bell requires --obs2");
    }
    if (!args.bell && !args.obs2.empty()) {
        throw UsageError("--obs2 is only valid together with --bell");
    }
    if (args.bell && !args.prep.empty()) {
        throw UsageError("--prep is not used with --bell (the Bell pair fixes the preparation)");
    }

    qce::ConfigurationDistribution dist;
    if (args.bell) {
        dist = qce::ensemble_bell(qce::Arrangement::bell_pair(
            parse_direction(args.obs, "--obs"), parse_direction(args.obs2, "--obs2")));
    } else {
        const auto [prep, sign] =
            parse_preparation(args.prep.empty() ? std::string("0,0,+") : args.prep);
        dist = qce::ensemble_single(
            qce::Arrangement::single_qubit(prep, sign, parse_direction(args.obs, "--obs")));
    }

    std::optional<qce::SampleResult> sampled;
    if (args.samples > 0) {
        sampled = qce::sample(dist, args.seed, args.samples);
    }

    std::string text;
    if (args.format == "csv") {
        text = ensemble_csv(dist, sampled ? &*sampled : nullptr);
    } else {
        text = (sampled ? qce::to_json(dist, *sampled) : qce::to_json(dist)).dump(2) + "\n";
    }
    emit(text, args.output);
    return 0;
}

// ---------------------------------------------------------------------------
// interfere

struct InterfereArgs {
    std::string layout;
    std::string placement;
    std::uint64_t runs = 0;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string output;
};

std::string counts_csv_block(const std::string& prefix,
                             const std::array<std::uint64_t, 2>& detector,
                             const std::array<std::uint64_t, 2>& path) {
    std::string out;
    out += prefix + "detector.D1," + std::to_string(detector[0]) + '\n';
    out += prefix + "detector.D2," + std::to_string(detector[1]) + '\n';
    out += prefix + "path.A," + std::to_string(path[0]) + '\n';
    out += prefix + "path.B," + std::to_string(path[1]) + '\n';
    return out;
}

int run_interfere(const InterfereArgs& args) {
    std::optional<qce::Layout> layout;
    if (args.layout == "direct") layout = qce::Layout::direct;
    if (args.layout == "single-bs") layout = qce::Layout::single_bs;
    if (args.layout == "double-bs") layout = qce::Layout::double_bs;
    if (args.layout == "delayed-choice") layout = qce::Layout::delayed_choice;
    if (!layout.has_value()) {
        throw UsageError("unknown layout '" + args.layout +
                         "' (expected direct|single-bs|double-bs|delayed-choice)");
    }

    if (*layout != qce::Layout::delayed_choice) {
        if (!args.placement.empty()) {
            throw UsageError("--placement is only valid for --layout delayed-choice");
        }
        qce::OpticalSetup setup{*layout, std::nullopt};
        const qce::ExperimentResult result = qce::run_experiment(setup, args.seed, args.runs);
        std::string text;
        if (args.format == "csv") {
            text = "# seed=" + std::to_string(args.seed) + "\nkey,value\n" +
                   "setup," + setup.name() + '\n' + "n," + std::to_string(result.n) + '\n' +
                   counts_csv_block("", result.detector_counts, result.path_counts);
        } else {
            text = qce::to_json(result).dump(2) + "\n";
        }
        emit(text, args.output);
        return 0;
    }

    if (args.placement.empty()) {
        throw UsageError(
            "delayed-choice requires --placement (after-first-bs|after-second-bs|random)");
    }
    if (args.placement == "after-first-bs" || args.placement == "after-second-bs") {
        const qce::OpticalSetup setup = qce::OpticalSetup::delayed_choice(
            args.placement == "after-first-bs" ? qce::Placement::after_first_bs
                                               : qce::Placement::after_second_bs);
        const qce::ExperimentResult result = qce::run_experiment(setup, args.seed, args.runs);
        std::string text;
        if (args.format == "csv") {
            text = "# seed=" + std::to_string(args.seed) + "\nkey,value\n" +
                   "setup," + setup.name() + '\n' + "placement," + args.placement + '\n' +
                   "n," + std::to_string(result.n) + '\n' +
                   counts_csv_block("", result.detector_counts, result.path_counts);
        } else {
            text = qce::to_json(result).dump(2) + "\n";
        }
        emit(text, args.output);
        return 0;
    }
    if (args.placement != "random") {
        throw UsageError("unknown placement '" + args.placement +
                         "' (expected after-first-bs|after-second-bs|random)");
    }

    const qce::DelayedChoiceReport report = qce::delayed_choice_report(args.seed, args.runs);
    std::string text;
    if (args.format == "csv") {
        text = "# seed=" + std::to_string(args.seed) + "\nkey,value\n";
        text += "setup,delayed-choice\nplacement,random\n";
        text += "n," + std::to_string(report.n) + '\n';
        text += "placement.after-first-bs," + std::to_string(report.placement_counts[0]) + '\n';
        text += "placement.after-second-bs," + std::to_string(report.placement_counts[1]) + '\n';
        text += counts_csv_block("after-first-bs.", report.after_first.detector_counts,
                                 report.after_first.path_counts);
        text += counts_csv_block("after-second-bs.", report.after_second.detector_counts,
                                 report.after_second.path_counts);
    } else {
        text = qce::to_json(report).dump(2) + "\n";
    }
    emit(text, args.output);
    return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    int steps = 0;
    int n_theta = 64;
    int n_phi = 8;
    std::string format = "csv";
    std::string output;
};

int run_sweep(const SweepArgs& args) {
    constexpr double kLimit = 1.0 - 1e-9;
    if (std::abs(args.sigma_min) > kLimit || std::abs(args.sigma_max) > kLimit ||
        args.sigma_min > args.sigma_max) {
        throw UsageError("sweep range must satisfy -1 < min <= max < 1");
    }
    if (args.steps < 2) {
        throw UsageError("sweep needs --steps >= 2");
    }

    std::vector<qce::EstimationReport> reports;
    reports.reserve(args.steps);
    for (int k = 0; k < args.steps; ++k) {
        const double sigma =
            args.sigma_min + static_cast<double>(k) * (args.sigma_max - args.sigma_min) /
                                 static_cast<double>(args.steps - 1);
        reports.push_back(qce::estimate_from_mean(sigma, args.n_theta, args.n_phi));
    }

    std::string text;
    if (args.format == "csv") {
        text = "sigma_z,lambda,Z,entropy,rho00,rho11\n";
        for (const auto& r : reports) {
            text += fmt17(r.sigma_z) + ',' + fmt17(r.lambda) + ',' + fmt17(r.z) + ',' +
                    fmt17(r.entropy) + ',' + fmt17(r.rho.entries[0].real()) + ',' +
                    fmt17(r.rho.entries[3].real()) + '\n';
        }
    } else {
        qce::Json rows = qce::Json::array();
        for (const auto& r : reports) rows.push_back(qce::to_json(r));
        text = rows.dump(2) + "\n";
    }
    emit(text, args.output);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Configuration-ensemble toolkit: maximum-relative-entropy qubit state "
                 "estimation, arrangement ensembles, and Mach-Zehnder simulation"};
    app.require_subcommand(1);

    EstimateArgs estimate_args;
    CLI::App* estimate = app.add_subcommand(
        "estimate", "Reconstruct the density matrix from an observed sigma_z mean");
    estimate->add_option("--sigma-z", estimate_args.sigma_z, "Observed mean of sigma_z")
        ->required();
    estimate->add_option("--n-theta", estimate_args.n_theta, "Polar quadrature nodes");
    estimate->add_option("--n-phi", estimate_args.n_phi, "Azimuthal quadrature nodes");
    estimate->add_option("--format", estimate_args.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    estimate->add_option("--output", estimate_args.output, "Output file (default stdout)");

    EnsembleArgs ensemble_args;
    CLI::App* ensemble = app.add_subcommand(
        "ensemble", "Configuration distribution for an arrangement, optionally sampled");
    ensemble->add_option("--prep", ensemble_args.prep, "Preparation '<theta>,<phi>,<+|->'");
    ensemble->add_option("--obs", ensemble_args.obs, "Observable '<theta>,<phi>'")->required();
    ensemble->add_option("--obs2", ensemble_args.obs2, "Second observable (with --bell)");
    ensemble->add_flag("--bell", ensemble_args.bell, "Bell-pair arrangement");
    ensemble->add_option("--samples", ensemble_args.samples, "Number of Monte Carlo draws");
    ensemble->add_option("--seed", ensemble_args.seed, "Sampling seed (default 0)");
    ensemble->add_option("--format", ensemble_args.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    ensemble->add_option("--output", ensemble_args.output, "Output file (default stdout)");

    InterfereArgs interfere_args;
    CLI::App* interfere =
        app.add_subcommand("interfere", "Run a single-photon beamsplitter experiment");
    interfere
        ->add_option("--layout", interfere_args.layout,
                     "direct|single-bs|double-bs|delayed-choice")
        ->required();
    interfere->add_option("--placement", interfere_args.placement,
                          "after-first-bs|after-second-bs|random (delayed-choice only)");
    interfere->add_option("--runs", interfere_args.runs, "Number of runs")->required();
    interfere->add_option("--seed", interfere_args.seed, "Sampling seed (default 0)");
    interfere->add_option("--format", interfere_args.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    interfere->add_option("--output", interfere_args.output, "Output file (default stdout)");

    SweepArgs sweep_args;
    CLI::App* sweep =
        app.add_subcommand("sweep", "Estimation table over a range of sigma_z values");
    sweep->add_option("--sigma-z-min", sweep_args.sigma_min, "Lower end of the range")
        ->required();
    sweep->add_option("--sigma-z-max", sweep_args.sigma_max, "Upper end of the range")
        ->required();
    sweep->add_option("--steps", sweep_args.steps, "Number of rows (>= 2)")->required();
    sweep->add_option("--n-theta", sweep_args.n_theta, "Polar quadrature nodes");
    sweep->add_option("--n-phi", sweep_args.n_phi, "Azimuthal quadrature nodes");
    sweep->add_option("--format", sweep_args.format, "csv or json")
        ->check(CLI::IsMember({"json", "csv"}));
    sweep->add_option("--output", sweep_args.output, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (estimate->parsed()) return run_estimate(estimate_args);
        if (ensemble->parsed()) return run_ensemble(ensemble_args);
        if (interfere->parsed()) return run_interfere(interfere_args);
        if (sweep->parsed()) return run_sweep(sweep_args);
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qce::TargetOutOfRangeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qce::NoConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
