// JSON views of the library's result types. Field order is fixed
// (ordered_json) so equal inputs serialize to identical bytes.

#pragma once

#include <nlohmann/json.hpp>

#include "qce/ensemble.hpp"
#include "qce/estimator.hpp"
#include "qce/interferometer.hpp"

namespace qce {

using Json = nlohmann::ordered_json;

// {"labels": [...], "probabilities": [...]}
Json to_json(const ConfigurationDistribution& dist);

// Adds "counts" (and the seed/n header) to the distribution object.
Json to_json(const ConfigurationDistribution& dist, const SampleResult& result);

// {"sigma_z", "lambda", "Z", "residual", "entropy",
//  "rho": [[re, im] x 4 row-major], "grid": {"n_theta", "n_phi"}}
Json to_json(const EstimationReport& report);

// {"setup", "seed", "n", "detector_counts", "path_counts"}
Json to_json(const ExperimentResult& result);

// Delayed-choice summary with a "by_placement" split.
Json to_json(const DelayedChoiceReport& report);

} // namespace qce
