#include "qce/json_io.hpp"

namespace qce {

namespace {

Json setup_json(const OpticalSetup& setup) {
    Json j;
    j["layout"] = setup.name();
    if (setup.placement.has_value()) {
        j["placement"] = to_string(*setup.placement);
    }
    return j;
}

Json counts_json(const std::array<std::uint64_t, 2>& detector,
                 const std::array<std::uint64_t, 2>& path) {
    Json j;
    j["detector_counts"] = {{"D1", detector[0]}, {"D2", detector[1]}};
    j["path_counts"] = {{"A", path[0]}, {"B", path[1]}};
    return j;
}

} // namespace

Json to_json(const ConfigurationDistribution& dist) {
    Json j;
    j["labels"] = dist.labels;
    j["probabilities"] = dist.probabilities;
    return j;
}

Json to_json(const ConfigurationDistribution& dist, const SampleResult& result) {
    Json j;
    j["seed"] = result.seed;
    j["n"] = result.records.size();
    j["labels"] = dist.labels;
    j["probabilities"] = dist.probabilities;
    j["counts"] = result.counts;
    return j;
}

Json to_json(const EstimationReport& report) {
    Json j;
    j["sigma_z"] = report.sigma_z;
    j["lambda"] = report.lambda;
    j["Z"] = report.z;
    j["residual"] = report.residual;
    j["entropy"] = report.entropy;
    Json rho = Json::array();
    for (const Complex& entry : report.rho.entries) {
        rho.push_back({entry.real(), entry.imag()});
    }
    j["rho"] = rho;
    j["grid"] = {{"n_theta", report.n_theta}, {"n_phi", report.n_phi}};
    return j;
}

Json to_json(const ExperimentResult& result) {
    Json j;
    j["setup"] = setup_json(result.setup);
    j["seed"] = result.seed;
    j["n"] = result.n;
    j.update(counts_json(result.detector_counts, result.path_counts));
    return j;
}

Json to_json(const DelayedChoiceReport& report) {
    Json j;
    j["setup"] = {{"layout", "delayed-choice"}, {"placement", "random"}};
    j["seed"] = report.seed;
    j["n"] = report.n;
    std::array<std::uint64_t, 2> detector{
        report.after_first.detector_counts[0] + report.after_second.detector_counts[0],
        report.after_first.detector_counts[1] + report.after_second.detector_counts[1]};
    std::array<std::uint64_t, 2> path{
        report.after_first.path_counts[0] + report.after_second.path_counts[0],
        report.after_first.path_counts[1] + report.after_second.path_counts[1]};
    j.update(counts_json(detector, path));
    Json split;
    const auto slice_json = [](const PlacementSlice& s) {
        Json sj;
        sj["n"] = s.n;
        sj.update(counts_json(s.detector_counts, s.path_counts));
        return sj;
    };
    split["after-first-bs"] = slice_json(report.after_first);
    split["after-second-bs"] = slice_json(report.after_second);
    j["by_placement"] = split;
    return j;
}

} // namespace qce
