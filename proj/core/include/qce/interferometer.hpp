// Single-photon Mach-Zehnder experiments: detector statistics from composed
// beamsplitter unitaries, plus a per-run path configuration assigned
// conditionally on the whole arrangement (setup and clicked detector), with
// reproducible counter-based sampling.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qce/bloch.hpp"

namespace qce {

enum class Layout { direct, single_bs, double_bs, delayed_choice };
enum class Placement { after_first_bs, after_second_bs };

struct OpticalSetup {
    Layout layout;
    std::optional<Placement> placement; // present iff layout == delayed_choice

    static OpticalSetup direct();
    static OpticalSetup single_bs();
    static OpticalSetup double_bs();
    static OpticalSetup delayed_choice(Placement placement);

    void validate() const;
    std::string name() const; // "direct", "single-bs", ...
};

// Beamsplitter unitary: transmission 1/sqrt(2), reflection i/sqrt(2).
// Row-major 2x2 acting on (arm A, arm B) amplitudes.
using TransferMatrix = std::array<Complex, 4>;

// Optics composed from the source to the detection stage of `setup`.
TransferMatrix composed_transfer(const OpticalSetup& setup);

struct PathAmplitudes {
    Complex arm_a;
    Complex arm_b;

    void validate() const; // unit norm within 1e-12
};

// Arm amplitudes at the detection stage, photon injected into arm A.
PathAmplitudes detection_amplitudes(const OpticalSetup& setup);

enum class Detector : int { d1 = 0, d2 = 1 };
enum class Arm : int { a = 0, b = 1 };

// {p(D1), p(D2)}. D1 watches the reflected/cross port at the detection
// stage (the bright port of the balanced double-BS arrangement); for the
// direct layout D1 watches the only beam. Probabilities below 1e-15 after
// composition are snapped to exactly 0, so dark ports stay dark for every
// seed.
std::array<double, 2> detector_distribution(const OpticalSetup& setup);

struct PhotonRun {
    std::uint64_t run_index;
    Detector clicked; // exactly one detector clicks per run
    Arm path;         // arm occupied between the first BS and detection
};

struct ExperimentResult {
    OpticalSetup setup;
    std::uint64_t seed;
    std::uint64_t n;
    std::vector<PhotonRun> runs;
    std::array<std::uint64_t, 2> detector_counts;
    std::array<std::uint64_t, 2> path_counts;
};

// n runs of the fixed setup. Path conditional given the clicked detector:
// one-to-one for detection after the first BS, a fair coin for detection
// after the second BS, arm A for the direct layout. Pure function of
// (setup, seed, n); threads > 1 partitions the index range and merges to
// the identical serial result.
ExperimentResult run_experiment(const OpticalSetup& setup, std::uint64_t seed,
                                std::uint64_t n, int threads = 1);

struct PlacementSlice {
    std::uint64_t n = 0;
    std::array<std::uint64_t, 2> detector_counts{0, 0};
    std::array<std::uint64_t, 2> path_counts{0, 0};
};

struct DelayedChoiceRun {
    std::uint64_t run_index;
    Placement placement;
    Detector clicked;
    Arm path;
};

struct DelayedChoiceReport {
    std::uint64_t seed;
    std::uint64_t n;
    std::array<std::uint64_t, 2> placement_counts; // {after-first, after-second}
    PlacementSlice after_first;
    PlacementSlice after_second;
    std::vector<DelayedChoiceRun> runs;
};

// n delayed-choice runs where each run's detector placement is chosen by a
// fair coin after the emission step of the simulation schedule; statistics
// are reported split by placement.
DelayedChoiceReport delayed_choice_report(std::uint64_t seed, std::uint64_t n);

std::string to_string(Detector d);
std::string to_string(Arm a);
std::string to_string(Placement p);

} // namespace qce
