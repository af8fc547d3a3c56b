// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Tolerances are pinned in the assertions below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qce/qce.hpp"

using namespace qce;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    if (!ok) ++g_failures;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2e", v);
    return buf;
}

BlochDirection random_direction(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return BlochDirection(std::acos(2.0 * unit(gen) - 1.0), 2.0 * kPi * unit(gen));
}

MarginalDensity random_marginal(const SphericalGrid& grid, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> value(0.1, 1.0);
    MarginalDensity p{grid, std::vector<double>(grid.size())};
    for (double& v : p.values) v = value(gen);
    const double norm = p.integral();
    for (double& v : p.values) v /= norm;
    return p;
}

// 1. Quadrature-reconstructed density matrix vs the closed form
//    (I + s*sigma_z)/2 across s = -0.9..0.9, entrywise 1e-8, under 1 s.
void criterion_reconstruction() {
    const auto t0 = std::chrono::steady_clock::now();
    const SphericalGrid grid = make_grid(64, 8);
    double worst = 0.0;
    for (int k = -9; k <= 9; ++k) {
        const double sigma = 0.1 * k;
        const DensityMatrix rho =
            reconstruct_density_matrix(maxent_density(solve_lambda(sigma), grid));
        const DensityMatrix target = von_neumann_check(sigma);
        for (int e = 0; e < 4; ++e) {
            worst = std::max(worst, std::abs(rho.entries[e] - target.entries[e]));
        }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(1, "reconstructed rho matches (I + s*sigma_z)/2 across the target grid",
           worst <= 1e-8 && seconds < 1.0,
           "max entry dev " + sci(worst) + ", " + sci(seconds) + " s at 64x8");
}

// 2. Multiplier solve vs the Langevin bisection oracle; partition value vs
//    sinh(lambda)/lambda.
void criterion_lagrange() {
    const double lambda_half = solve_lambda(0.5).lambda;
    const double oracle_half = oracle::solve_langevin(0.5);
    const double dev_half = std::abs(lambda_half - oracle_half);

    const double lambda_zero = std::abs(solve_lambda(0.0).lambda);

    const SphericalGrid grid = make_grid(64, 4);
    double worst_z = 0.0;
    for (double lambda : {-5.0, -1.0, -0.1, 0.1, 1.0, 5.0}) {
        worst_z = std::max(worst_z, std::abs(partition_function(lambda, grid) -
                                             oracle::partition_closed_form(lambda)));
    }
    report(2, "multiplier and partition value match the closed-form oracles",
           dev_half <= 1e-3 && lambda_zero <= 1e-12 && worst_z <= 1e-9,
           "lambda(0.5) dev " + sci(dev_half) + " vs oracle " + sci(oracle_half) +
               ", |lambda(0)| " + sci(lambda_zero) + ", max Z dev " + sci(worst_z));
}

// 3. Joint-vs-marginal entropy reduction and the expectation reduction
//    chain on random QM-compatible densities.
void criterion_reductions() {
    const SphericalGrid grid = make_grid(64, 2);
    const MarginalDensity uniform = MarginalDensity::uniform(grid);
    const JointDensity m_joint = JointDensity::from_marginal(uniform);
    std::mt19937_64 gen(1009);
    double worst_entropy = 0.0;
    double worst_expectation = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const MarginalDensity p = random_marginal(grid, gen);
        const JointDensity joint = JointDensity::from_marginal(p);
        worst_entropy =
            std::max(worst_entropy, std::abs(relative_entropy_joint(joint, m_joint) -
                                             relative_entropy_marginal(p, uniform)));
        double triple = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            triple += grid.weight_at(k) * (joint.plus[k] - joint.minus[k]);
        }
        worst_expectation =
            std::max(worst_expectation, std::abs(triple - expectation_sigma_z(joint)));
    }
    report(3, "entropy and expectation reduce from joint to marginal form",
           worst_entropy <= 1e-10 && worst_expectation <= 1e-10,
           "max entropy dev " + sci(worst_entropy) + ", max expectation dev " +
               sci(worst_expectation) + " over 50 densities");
}

// 4. Feasible perturbations of the solution never raise the entropy.
void criterion_optimality() {
    const SphericalGrid grid = make_grid(64, 4);
    const MarginalDensity uniform = MarginalDensity::uniform(grid);
    const JointDensity density = maxent_density(solve_lambda(0.5), grid);
    const MarginalDensity p = density.marginal();
    const double h_max = relative_entropy_marginal(p, uniform);

    auto inner = [&grid](const std::vector<double>& f, const std::vector<double>& g) {
        double acc = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) acc += grid.weight_at(k) * f[k] * g[k];
        return acc;
    };
    const std::vector<double> ones(grid.size(), 1.0);
    std::vector<double> u_modes(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) u_modes[k] = grid.u_at(k);
    const double shift = inner(u_modes, ones) / inner(ones, ones);
    for (double& v : u_modes) v -= shift;

    const double p_min = *std::min_element(p.values.begin(), p.values.end());
    const double eps = 1e-3;
    std::mt19937_64 gen(1013);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double worst_gain = -1.0;
    bool feasible = true;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> delta(grid.size());
        for (double& v : delta) v = unit(gen);
        const double c0 = inner(delta, ones) / inner(ones, ones);
        for (double& v : delta) v -= c0;
        const double c1 = inner(delta, u_modes) / inner(u_modes, u_modes);
        for (std::size_t k = 0; k < grid.size(); ++k) delta[k] -= c1 * u_modes[k];
        double max_abs = 0.0;
        for (double v : delta) max_abs = std::max(max_abs, std::abs(v));
        const double scale = std::min(1.0, 0.5 * p_min / (eps * max_abs));
        MarginalDensity perturbed = p;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            perturbed.values[k] += eps * scale * delta[k];
            feasible = feasible && perturbed.values[k] >= 0.0;
        }
        worst_gain =
            std::max(worst_gain, relative_entropy_marginal(perturbed, uniform) - h_max);
    }
    report(4, "no feasible perturbation raises the solution entropy",
           feasible && worst_gain <= 1e-12,
           "max entropy gain " + sci(worst_gain) + " over 20 perturbations at eps 1e-3");
}

// 5. Detector statistics per layout, including the per-placement split of
//    the delayed-choice report.
void criterion_interferometer() {
    bool ok = true;
    std::string detail;

    const auto direct = run_experiment(OpticalSetup::direct(), 5, 1000);
    ok = ok && direct.detector_counts[0] == 1000;

    const auto single = run_experiment(OpticalSetup::single_bs(), 5, 10000);
    const double single_dev = std::abs(double(single.detector_counts[0]) - 5000.0);
    ok = ok && single_dev <= 150.0;

    bool double_exact = true;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto dbl = run_experiment(OpticalSetup::double_bs(), seed, 4000);
        double_exact = double_exact && dbl.detector_counts[0] == 4000 &&
                       dbl.detector_counts[1] == 0;
    }
    ok = ok && double_exact;

    const DelayedChoiceReport delayed = delayed_choice_report(5, 20000);
    const bool second_exact =
        delayed.after_second.detector_counts[0] == delayed.after_second.n &&
        delayed.after_second.detector_counts[1] == 0;
    const double n1 = double(delayed.after_first.n);
    const double first_dev =
        std::abs(double(delayed.after_first.detector_counts[0]) - n1 / 2.0);
    ok = ok && second_exact && first_dev <= 3.0 * std::sqrt(n1 * 0.25);

    detail = "single-bs dev " + sci(single_dev) + " (bound 150), double-bs exact over 25 seeds " +
             (double_exact ? "yes" : "NO") + ", delayed split: second exact " +
             (second_exact ? "yes" : "NO") + ", first dev " + sci(first_dev);
    report(5, "beamsplitter statistics depend only on the final detector placement", ok, detail);
}

// 6. Bell-pair joint outcome table vs the explicit 4-dim amplitude oracle.
void criterion_bell() {
    std::mt19937_64 gen(1021);
    double worst = 0.0;
    double worst_marginal = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const BlochDirection a = random_direction(gen);
        const BlochDirection b = random_direction(gen);
        const ConfigurationDistribution dist =
            ensemble_bell(Arrangement::bell_pair(a, b));
        const double expected[4] = {
            oracle::bell_probability(a.theta(), a.phi(), +1, b.theta(), b.phi(), +1),
            oracle::bell_probability(a.theta(), a.phi(), +1, b.theta(), b.phi(), -1),
            oracle::bell_probability(a.theta(), a.phi(), -1, b.theta(), b.phi(), +1),
            oracle::bell_probability(a.theta(), a.phi(), -1, b.theta(), b.phi(), -1)};
        for (int k = 0; k < 4; ++k) {
            worst = std::max(worst, std::abs(dist.probabilities[k] - expected[k]));
        }
        worst_marginal = std::max(
            worst_marginal,
            std::abs(dist.probabilities[0] + dist.probabilities[1] - 0.5));
        worst_marginal = std::max(
            worst_marginal,
            std::abs(dist.probabilities[0] + dist.probabilities[2] - 0.5));
    }
    report(6, "Bell-pair ensembles match the 4-dim amplitude oracle",
           worst <= 1e-10 && worst_marginal <= 1e-12,
           "max joint dev " + sci(worst) + ", max marginal dev " + sci(worst_marginal) +
               " over 100 direction pairs");
}

// 7. Sampling operations are byte-identical across reruns and across
//    serial/parallel execution.
void criterion_determinism() {
    const ConfigurationDistribution dist =
        ensemble_bell(Arrangement::bell_pair(z_axis(), x_axis()));
    const std::string s1 = to_json(dist, sample(dist, 31415, 100000)).dump();
    const std::string s2 = to_json(dist, sample(dist, 31415, 100000)).dump();
    const std::string s4 = to_json(dist, sample(dist, 31415, 100000, 4)).dump();

    const OpticalSetup setup = OpticalSetup::single_bs();
    const std::string e1 = to_json(run_experiment(setup, 2718, 100000)).dump();
    const std::string e2 = to_json(run_experiment(setup, 2718, 100000)).dump();
    const std::string e4 = to_json(run_experiment(setup, 2718, 100000, 4)).dump();

    const std::string d1 = to_json(delayed_choice_report(999, 50000)).dump();
    const std::string d2 = to_json(delayed_choice_report(999, 50000)).dump();

    const bool ok = s1 == s2 && s1 == s4 && e1 == e2 && e1 == e4 && d1 == d2;
    report(7, "sampling output is byte-identical across reruns and worker counts", ok,
           ok ? "three operations, serial and 4-way parallel" : "mismatch detected");
}

// 8. Reported quantities are stable under doubling the polar rule.
void criterion_grid_stability() {
    double worst = 0.0;
    for (double sigma : {-0.9, -0.5, 0.0, 0.5, 0.9}) { // |lambda| <= 10
        const EstimationReport coarse = estimate_from_mean(sigma, 64, 8);
        const EstimationReport fine = estimate_from_mean(sigma, 128, 8);
        worst = std::max(worst, std::abs(coarse.lambda - fine.lambda));
        worst = std::max(worst, std::abs(coarse.z - fine.z));
        worst = std::max(worst, std::abs(coarse.entropy - fine.entropy));
        for (int e = 0; e < 4; ++e) {
            worst = std::max(worst, std::abs(coarse.rho.entries[e] - fine.rho.entries[e]));
        }
    }
    report(8, "estimator output is stable when doubling the polar rule 64 -> 128",
           worst <= 1e-10, "max quantity dev " + sci(worst));
}

} // namespace

int main() {
    criterion_reconstruction();
    criterion_lagrange();
    criterion_reductions();
    criterion_optimality();
    criterion_interferometer();
    criterion_bell();
    criterion_determinism();
    criterion_grid_stability();
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criterion(s) failed\n", g_failures);
    }
    return g_failures;
}
