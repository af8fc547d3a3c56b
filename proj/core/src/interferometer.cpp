#include "qce/interferometer.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "qce/rng.hpp"

namespace qce {

namespace {

// Per-run substreams of the counter-based RNG. The delayed-choice schedule
// draws in event order: emission, placement choice, then detection.
constexpr std::uint64_t kStreamDetector = 0;
constexpr std::uint64_t kStreamPath = 1;
constexpr std::uint64_t kStreamPlacement = 2;

constexpr double kDarkPortEps = 1e-15;

TransferMatrix identity_transfer() {
    return {Complex(1.0), Complex(0.0), Complex(0.0), Complex(1.0)};
}

TransferMatrix beamsplitter() {
    const double t = 1.0 / std::sqrt(2.0);
    return {Complex(t), Complex(0.0, t), Complex(0.0, t), Complex(t)};
}

TransferMatrix multiply(const TransferMatrix& lhs, const TransferMatrix& rhs) {
    return {lhs[0] * rhs[0] + lhs[1] * rhs[2], lhs[0] * rhs[1] + lhs[1] * rhs[3],
            lhs[2] * rhs[0] + lhs[3] * rhs[2], lhs[2] * rhs[1] + lhs[3] * rhs[3]};
}

// Number of beamsplitters traversed before the detectors.
int beamsplitter_count(const OpticalSetup& setup) {
    switch (setup.layout) {
        case Layout::direct:
            return 0;
        case Layout::single_bs:
            return 1;
        case Layout::double_bs:
            return 2;
        case Layout::delayed_choice:
            return *setup.placement == Placement::after_first_bs ? 1 : 2;
    }
    throw std::invalid_argument("unknown layout");
}

bool detection_after_first_bs(const OpticalSetup& setup) {
    return beamsplitter_count(setup) == 1;
}

Detector draw_detector(const std::array<double, 2>& dist, double u) {
    return u < dist[0] ? Detector::d1 : Detector::d2;
}

PhotonRun simulate_run(const OpticalSetup& setup, const std::array<double, 2>& dist,
                       const CounterRng& rng, std::uint64_t i) {
    const Detector clicked = draw_detector(dist, rng.uniform(i, kStreamDetector));
    Arm path = Arm::a;
    if (setup.layout == Layout::direct) {
        path = Arm::a; // the only beam
    } else if (detection_after_first_bs(setup)) {
        // Detectors sit on the arms: D1 on the reflected arm B, D2 on the
        // transmitted arm A, so the click identifies the path.
        path = clicked == Detector::d1 ? Arm::b : Arm::a;
    } else {
        // Between the two BS the arrangement is symmetric in the arms; the
        // path is a fair coin independent of the (deterministic) click.
        path = rng.uniform(i, kStreamPath) < 0.5 ? Arm::a : Arm::b;
    }
    return PhotonRun{i, clicked, path};
}

} // namespace

OpticalSetup OpticalSetup::direct() { return {Layout::direct, std::nullopt}; }
OpticalSetup OpticalSetup::single_bs() { return {Layout::single_bs, std::nullopt}; }
OpticalSetup OpticalSetup::double_bs() { return {Layout::double_bs, std::nullopt}; }
OpticalSetup OpticalSetup::delayed_choice(Placement placement) {
    return {Layout::delayed_choice, placement};
}

void OpticalSetup::validate() const {
    if ((layout == Layout::delayed_choice) != placement.has_value()) {
        throw std::invalid_argument(
            "OpticalSetup: detector placement must be present exactly for delayed-choice");
    }
}

std::string OpticalSetup::name() const {
    switch (layout) {
        case Layout::direct:
            return "direct";
        case Layout::single_bs:
            return "single-bs";
        case Layout::double_bs:
            return "double-bs";
        case Layout::delayed_choice:
            return "delayed-choice";
    }
    throw std::invalid_argument("unknown layout");
}

TransferMatrix composed_transfer(const OpticalSetup& setup) {
    setup.validate();
    TransferMatrix m = identity_transfer();
    for (int i = 0; i < beamsplitter_count(setup); ++i) {
        m = multiply(beamsplitter(), m);
    }
    return m;
}

void PathAmplitudes::validate() const {
    if (std::abs(std::norm(arm_a) + std::norm(arm_b) - 1.0) > 1e-12) {
        throw std::invalid_argument("PathAmplitudes: not normalized");
    }
}

PathAmplitudes detection_amplitudes(const OpticalSetup& setup) {
    const TransferMatrix m = composed_transfer(setup);
    PathAmplitudes amp{m[0], m[2]}; // photon enters in arm A
    amp.validate();
    return amp;
}

std::array<double, 2> detector_distribution(const OpticalSetup& setup) {
    const PathAmplitudes amp = detection_amplitudes(setup);
    // D1 watches arm B (reflected/cross port) when any BS is present,
    // otherwise the single beam in arm A.
    double p1 = setup.layout == Layout::direct ? std::norm(amp.arm_a) : std::norm(amp.arm_b);
    double p2 = setup.layout == Layout::direct ? std::norm(amp.arm_b) : std::norm(amp.arm_a);
    if (p1 < kDarkPortEps) p1 = 0.0;
    if (p2 < kDarkPortEps) p2 = 0.0;
    const double total = p1 + p2;
    return {p1 / total, p2 / total};
}

ExperimentResult run_experiment(const OpticalSetup& setup, std::uint64_t seed,
                                std::uint64_t n, int threads) {
    setup.validate();
    if (n < 1) {
        throw std::invalid_argument("run_experiment: n must be >= 1");
    }
    if (threads < 1) {
        throw std::invalid_argument("run_experiment: threads must be >= 1");
    }
    const std::array<double, 2> dist = detector_distribution(setup);
    const CounterRng rng(seed);

    ExperimentResult result{setup, seed, n, std::vector<PhotonRun>(n), {0, 0}, {0, 0}};
    auto fill_range = [&](std::uint64_t lo, std::uint64_t hi,
                          std::array<std::uint64_t, 2>& detector_counts,
                          std::array<std::uint64_t, 2>& path_counts) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            const PhotonRun run = simulate_run(setup, dist, rng, i);
            result.runs[i] = run;
            ++detector_counts[static_cast<int>(run.clicked)];
            ++path_counts[static_cast<int>(run.path)];
        }
    };

    if (threads == 1 || n < 2) {
        fill_range(0, n, result.detector_counts, result.path_counts);
    } else {
        const auto worker_count = static_cast<std::uint64_t>(threads);
        const std::uint64_t chunk = (n + worker_count - 1) / worker_count;
        std::vector<std::array<std::uint64_t, 2>> det(worker_count, {0, 0});
        std::vector<std::array<std::uint64_t, 2>> path(worker_count, {0, 0});
        std::vector<std::thread> workers;
        for (std::uint64_t w = 0; w < worker_count; ++w) {
            const std::uint64_t lo = std::min(w * chunk, n);
            const std::uint64_t hi = std::min(lo + chunk, n);
            workers.emplace_back([&fill_range, &det, &path, w, lo, hi] {
                fill_range(lo, hi, det[w], path[w]);
            });
        }
        for (auto& t : workers) t.join();
        for (std::uint64_t w = 0; w < worker_count; ++w) {
            for (int k = 0; k < 2; ++k) {
                result.detector_counts[k] += det[w][k];
                result.path_counts[k] += path[w][k];
            }
        }
    }
    return result;
}

DelayedChoiceReport delayed_choice_report(std::uint64_t seed, std::uint64_t n) {
    if (n < 2) {
        throw std::invalid_argument("delayed_choice_report: n must be >= 2");
    }
    const CounterRng rng(seed);
    const OpticalSetup first = OpticalSetup::delayed_choice(Placement::after_first_bs);
    const OpticalSetup second = OpticalSetup::delayed_choice(Placement::after_second_bs);
    const std::array<double, 2> dist_first = detector_distribution(first);
    const std::array<double, 2> dist_second = detector_distribution(second);

    DelayedChoiceReport report{seed, n, {0, 0}, {}, {}, {}};
    report.runs.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        // Schedule: the photon is emitted, then the placement is chosen,
        // then detection happens with the chosen placement.
        const bool place_first = rng.uniform(i, kStreamPlacement) < 0.5;
        const OpticalSetup& setup = place_first ? first : second;
        const std::array<double, 2>& dist = place_first ? dist_first : dist_second;
        const PhotonRun run = simulate_run(setup, dist, rng, i);

        const Placement placement =
            place_first ? Placement::after_first_bs : Placement::after_second_bs;
        PlacementSlice& slice = place_first ? report.after_first : report.after_second;
        ++report.placement_counts[place_first ? 0 : 1];
        ++slice.n;
        ++slice.detector_counts[static_cast<int>(run.clicked)];
        ++slice.path_counts[static_cast<int>(run.path)];
        report.runs.push_back(DelayedChoiceRun{i, placement, run.clicked, run.path});
    }
    return report;
}

std::string to_string(Detector d) { return d == Detector::d1 ? "D1" : "D2"; }
std::string to_string(Arm a) { return a == Arm::a ? "A" : "B"; }
std::string to_string(Placement p) {
    return p == Placement::after_first_bs ? "after-first-bs" : "after-second-bs";
}

} // namespace qce
