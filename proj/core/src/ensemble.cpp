#include "qce/ensemble.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qce/errors.hpp"
#include "qce/rng.hpp"

namespace qce {

namespace {

std::string shortest(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

char sign_char(int s) { return s == 1 ? '+' : '-'; }

void require_sign(int s) {
    if (s != 1 && s != -1) {
        throw std::invalid_argument("sign must be +1 or -1");
    }
}

std::string single_label(const Arrangement& arr, int outcome) {
    std::string out = "(";
    out += direction_token(arr.preparation);
    out += sign_char(arr.preparation_sign);
    out += ")(";
    out += direction_token(arr.observables[0]);
    out += sign_char(outcome);
    out += ')';
    return out;
}

std::string bell_label(const Arrangement& arr, int ra, int rb) {
    std::string out = "(psi)(";
    out += direction_token(arr.observables[0]);
    out += sign_char(ra);
    out += ")(";
    out += direction_token(arr.observables[1]);
    out += sign_char(rb);
    out += ')';
    return out;
}

} // namespace

std::string direction_token(const BlochDirection& d) {
    // ';' between the angles keeps labels usable as single CSV cells.
    return "n(" + shortest(d.theta()) + ";" + shortest(d.phi()) + ")";
}

Arrangement Arrangement::single_qubit(const BlochDirection& preparation, int preparation_sign,
                                      const BlochDirection& observable) {
    require_sign(preparation_sign);
    return {ArrangementKind::single_qubit, preparation, preparation_sign, {observable}};
}

Arrangement Arrangement::bell_pair(const BlochDirection& observable_a,
                                   const BlochDirection& observable_b) {
    return {ArrangementKind::bell_pair, z_axis(), +1, {observable_a, observable_b}};
}

BlochDirection Arrangement::prepared_direction() const {
    return preparation_sign == 1 ? preparation : preparation.antipode();
}

void ConfigurationDistribution::validate() const {
    if (labels.size() != probabilities.size()) {
        throw std::invalid_argument("ConfigurationDistribution: label/probability size mismatch");
    }
    double total = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0)) {
            throw std::invalid_argument("ConfigurationDistribution: negative probability");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("ConfigurationDistribution: probabilities do not sum to 1");
    }
}

ConfigurationDistribution ensemble_single(const Arrangement& arrangement) {
    if (arrangement.kind != ArrangementKind::single_qubit) {
        throw WrongKindError("ensemble_single: arrangement is not single-qubit");
    }
    if (arrangement.observables.size() != 1) {
        throw std::invalid_argument("ensemble_single: expected exactly one observable");
    }
    const BlochDirection prep = arrangement.prepared_direction();
    const BlochDirection& obs = arrangement.observables[0];
    ConfigurationDistribution dist{
        {single_label(arrangement, +1), single_label(arrangement, -1)},
        {transition_probability(prep, obs, +1), transition_probability(prep, obs, -1)}};
    dist.validate();
    return dist;
}

ConfigurationDistribution ensemble_bell(const Arrangement& arrangement) {
    if (arrangement.kind != ArrangementKind::bell_pair) {
        throw WrongKindError("ensemble_bell: arrangement is not bell-pair");
    }
    if (arrangement.observables.size() != 2) {
        throw std::invalid_argument("ensemble_bell: expected exactly two observables");
    }
    const BlochDirection& a = arrangement.observables[0];
    const BlochDirection& b = arrangement.observables[1];
    ConfigurationDistribution dist;
    for (int ra : {+1, -1}) {
        for (int rb : {+1, -1}) {
            dist.labels.push_back(bell_label(arrangement, ra, rb));
            dist.probabilities.push_back(bell_joint_probability(a, b, ra, rb));
        }
    }
    dist.validate();
    return dist;
}

StateAsDistributionSet state_as_distribution_set(const BlochDirection& preparation,
                                                 int preparation_sign,
                                                 std::span<const BlochDirection> observables) {
    require_sign(preparation_sign);
    if (observables.empty()) {
        throw std::invalid_argument("state_as_distribution_set: observable list is empty");
    }
    StateAsDistributionSet set{preparation, preparation_sign, {}};
    const BlochDirection prep =
        preparation_sign == 1 ? preparation : preparation.antipode();
    set.entries.reserve(observables.size());
    for (const BlochDirection& obs : observables) {
        set.entries.emplace_back(obs, std::array<double, 2>{
                                          transition_probability(prep, obs, +1),
                                          transition_probability(prep, obs, -1)});
    }
    return set;
}

SampleResult sample(const ConfigurationDistribution& dist, std::uint64_t seed,
                    std::uint64_t n, int threads) {
    dist.validate();
    if (n < 1) {
        throw std::invalid_argument("sample: n must be >= 1");
    }
    if (threads < 1) {
        throw std::invalid_argument("sample: threads must be >= 1");
    }

    // Inclusive prefix sums; the final entry is pinned to 1 so every
    // uniform draw in [0, 1) lands in a cell.
    std::vector<double> cumulative(dist.probabilities.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < dist.probabilities.size(); ++k) {
        acc += dist.probabilities[k];
        cumulative[k] = acc;
    }
    cumulative.back() = 1.0;

    const CounterRng rng(seed);
    SampleResult result{seed, std::vector<RunRecord>(n),
                        std::vector<std::uint64_t>(dist.probabilities.size(), 0)};

    auto fill_range = [&](std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t>& counts) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            const double u = rng.uniform(i);
            const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
            const auto k = static_cast<std::uint32_t>(it - cumulative.begin());
            result.records[i] = RunRecord{i, k};
            ++counts[k];
        }
    };

    if (threads == 1 || n < 2) {
        fill_range(0, n, result.counts);
    } else {
        const auto worker_count = static_cast<std::uint64_t>(threads);
        const std::uint64_t chunk = (n + worker_count - 1) / worker_count;
        std::vector<std::vector<std::uint64_t>> partial(
            worker_count, std::vector<std::uint64_t>(dist.probabilities.size(), 0));
        std::vector<std::thread> workers;
        for (std::uint64_t w = 0; w < worker_count; ++w) {
            const std::uint64_t lo = std::min(w * chunk, n);
            const std::uint64_t hi = std::min(lo + chunk, n);
            workers.emplace_back([&fill_range, &partial, w, lo, hi] {
                fill_range(lo, hi, partial[w]);
            });
        }
        for (auto& t : workers) t.join();
        for (const auto& counts : partial) {
            for (std::size_t k = 0; k < counts.size(); ++k) {
                result.counts[k] += counts[k];
            }
        }
    }
    return result;
}

const std::string& configuration(const ConfigurationDistribution& dist, const RunRecord& record) {
    return dist.labels.at(record.label_index);
}

} // namespace qce
