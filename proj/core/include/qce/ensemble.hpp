// Arrangement-level configuration ensembles: the finite probability table
// over configurations fixed jointly by a preparation and the measurement
// observables, the state-as-distribution-set view over a finite observable
// list, and reproducible Monte Carlo sampling of realized configurations
// keyed by (seed, run index).

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qce/bloch.hpp"

namespace qce {

enum class ArrangementKind { single_qubit, bell_pair };

// Macroscopic parameters of one experimental arrangement: the prepared
// eigenstate and the observable direction(s).
struct Arrangement {
    ArrangementKind kind;
    BlochDirection preparation;
    int preparation_sign; // +1 or -1; the prepared eigenstate of `preparation`
    std::vector<BlochDirection> observables; // 1 entry for single-qubit, 2 for bell-pair

    static Arrangement single_qubit(const BlochDirection& preparation, int preparation_sign,
                                    const BlochDirection& observable);
    static Arrangement bell_pair(const BlochDirection& observable_a,
                                 const BlochDirection& observable_b);

    // Direction of the eigenstate actually prepared.
    BlochDirection prepared_direction() const;
};

// Finite probability table over configuration labels, in fixed label order
// (+ before -, lexicographic for outcome pairs).
struct ConfigurationDistribution {
    std::vector<std::string> labels;
    std::vector<double> probabilities;

    void validate() const; // nonnegative entries summing to 1 within 1e-12
};

// Canonical text token for a direction, round-trippable to the exact
// double values: "n(<theta>;<phi>)".
std::string direction_token(const BlochDirection& d);

// {p(prep)(obs+), p(prep)(obs-)} for a single-qubit arrangement.
ConfigurationDistribution ensemble_single(const Arrangement& arrangement);

// The four joint-outcome probabilities (++, +-, -+, --) for a Bell-pair
// arrangement.
ConfigurationDistribution ensemble_bell(const Arrangement& arrangement);

// One two-outcome distribution per observable, all for the same prepared
// eigenstate. Entries keep the caller's observable order.
struct StateAsDistributionSet {
    BlochDirection preparation;
    int preparation_sign;
    std::vector<std::pair<BlochDirection, std::array<double, 2>>> entries;
};

StateAsDistributionSet state_as_distribution_set(const BlochDirection& preparation,
                                                 int preparation_sign,
                                                 std::span<const BlochDirection> observables);

// One realized configuration. The label index refers to the distribution
// the record was sampled from; the seed lives in the SampleResult header.
struct RunRecord {
    std::uint64_t run_index;
    std::uint32_t label_index;
};

struct SampleResult {
    std::uint64_t seed;
    std::vector<RunRecord> records;       // ordered by run_index
    std::vector<std::uint64_t> counts;    // per label, sums to records.size()
};

// Inverse-CDF sampling with a counter-based stream: the result is a pure
// function of (dist, seed, n). With threads > 1 the index range is
// partitioned across workers and merged in index order; the output is
// identical to the serial run.
SampleResult sample(const ConfigurationDistribution& dist, std::uint64_t seed,
                    std::uint64_t n, int threads = 1);

// Realized-configuration label of a record.
const std::string& configuration(const ConfigurationDistribution& dist, const RunRecord& record);

} // namespace qce
