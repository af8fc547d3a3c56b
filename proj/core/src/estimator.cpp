#include "qce/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <gsl/gsl_integration.h>

#include "qce/errors.hpp"
#include "qce/sum.hpp"

namespace qce {

namespace {

constexpr double kFourPi = 4.0 * kPi;
constexpr double kUniformPrior = 1.0 / kFourPi;

// Largest |lambda| the solver will resolve before giving up; the internal
// rule needs n ~ 5*sqrt(|lambda|) theta nodes to resolve the exp boundary
// layer, capped at 16384 nodes.
constexpr int kMaxSolverNodes = 16384;

double born_plus_weight(double u) { return 0.5 * (1.0 + u); }

std::function<double(double, double)> uniform_prior_fn() {
    return [](double, double) { return kUniformPrior; };
}

int nodes_for_lambda(double lambda_magnitude, int base) {
    const double needed = 5.0 * std::sqrt(std::max(1.0, lambda_magnitude));
    int n = std::max(base, static_cast<int>(std::ceil(needed)));
    n = (n + 31) / 32 * 32;
    return n;
}

// Prior values and (u, weight) pairs flattened over one internal grid.
struct ConstraintGrid {
    SphericalGrid grid;
    std::vector<double> prior_values; // per flattened node
};

ConstraintGrid build_constraint_grid(int n_theta, int n_phi,
                                     const std::function<double(double, double)>& prior) {
    ConstraintGrid cg{make_grid(n_theta, n_phi), {}};
    cg.prior_values.resize(cg.grid.size());
    for (std::size_t k = 0; k < cg.grid.size(); ++k) {
        const double m = prior(cg.grid.theta_at(k), cg.grid.phi_at(k));
        if (!(m > 0.0)) {
            throw NonpositivePriorError("solve_lambda: prior must be strictly positive");
        }
        cg.prior_values[k] = m;
    }
    return cg;
}

// Grid expectation of u under m * exp(-lambda*u), exponent-shifted so the
// evaluation never overflows.
double constraint_expectation(const ConstraintGrid& cg, double lambda) {
    const SphericalGrid& g = cg.grid;
    double max_exponent = -std::numeric_limits<double>::infinity();
    for (double u : g.u_nodes) {
        max_exponent = std::max(max_exponent, -lambda * u);
    }
    const auto term = [&](std::size_t k) {
        return g.weight_at(k) * cg.prior_values[k] *
               std::exp(-lambda * g.u_at(k) - max_exponent);
    };
    const double denom = pairwise_sum(g.size(), term);
    const double numer = pairwise_sum(g.size(), [&](std::size_t k) {
        return term(k) * g.u_at(k);
    });
    return numer / denom;
}

double log_partition(const ConstraintGrid& cg, double lambda) {
    const SphericalGrid& g = cg.grid;
    double max_exponent = -std::numeric_limits<double>::infinity();
    for (double u : g.u_nodes) {
        max_exponent = std::max(max_exponent, -lambda * u);
    }
    const double shifted = pairwise_sum(g.size(), [&](std::size_t k) {
        return g.weight_at(k) * cg.prior_values[k] *
               std::exp(-lambda * g.u_at(k) - max_exponent);
    });
    return max_exponent + std::log(shifted);
}

} // namespace

double SphericalGrid::theta_at(std::size_t k) const {
    return std::acos(u_at(k));
}

double SphericalGrid::total_weight() const {
    return pairwise_sum(size(), [this](std::size_t k) { return weight_at(k); });
}

SphericalGrid make_grid(int n_theta, int n_phi) {
    if (n_theta < 2 || n_phi < 1) {
        throw std::invalid_argument("make_grid: need n_theta >= 2 and n_phi >= 1");
    }
    SphericalGrid grid;
    grid.u_nodes.resize(n_theta);
    grid.u_weights.resize(n_theta);

    gsl_integration_glfixed_table* table =
        gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n_theta));
    if (table == nullptr) {
        throw std::runtime_error("make_grid: Gauss-Legendre table allocation failed");
    }
    for (int i = 0; i < n_theta; ++i) {
        double x = 0.0;
        double w = 0.0;
        gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &x, &w, table);
        grid.u_nodes[i] = x;
        grid.u_weights[i] = w;
    }
    gsl_integration_glfixed_table_free(table);

    grid.phi_nodes.resize(n_phi);
    for (int j = 0; j < n_phi; ++j) {
        grid.phi_nodes[j] = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n_phi);
    }
    grid.phi_weight = 2.0 * kPi / static_cast<double>(n_phi);
    return grid;
}

double MarginalDensity::integral() const {
    return pairwise_sum(grid.size(), [this](std::size_t k) {
        return grid.weight_at(k) * values[k];
    });
}

void MarginalDensity::validate() const {
    if (values.size() != grid.size()) {
        throw std::invalid_argument("MarginalDensity: value count does not match grid");
    }
    for (double v : values) {
        if (!(v >= 0.0)) {
            throw std::invalid_argument("MarginalDensity: negative value");
        }
    }
    if (std::abs(integral() - 1.0) > 1e-8) {
        throw std::invalid_argument("MarginalDensity: integral is not 1");
    }
}

MarginalDensity MarginalDensity::uniform(SphericalGrid grid) {
    const std::size_t n = grid.size();
    return {std::move(grid), std::vector<double>(n, kUniformPrior)};
}

MarginalDensity JointDensity::marginal() const {
    MarginalDensity p{grid, std::vector<double>(grid.size())};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        p.values[k] = plus[k] + minus[k];
    }
    return p;
}

double JointDensity::integral() const {
    return pairwise_sum(2 * grid.size(), [this](std::size_t k) {
        const std::size_t node = k % grid.size();
        const double v = k < grid.size() ? plus[node] : minus[node];
        return grid.weight_at(node) * v;
    });
}

bool JointDensity::qm_compatible() const {
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double total = plus[k] + minus[k];
        if (total <= 1e-14) continue;
        if (std::abs(plus[k] / total - born_plus_weight(grid.u_at(k))) > 1e-10) {
            return false;
        }
    }
    return true;
}

void JointDensity::validate() const {
    if (plus.size() != grid.size() || minus.size() != grid.size()) {
        throw std::invalid_argument("JointDensity: value count does not match grid");
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(plus[k] >= 0.0) || !(minus[k] >= 0.0)) {
            throw std::invalid_argument("JointDensity: negative value");
        }
    }
    if (std::abs(integral() - 1.0) > 1e-8) {
        throw std::invalid_argument("JointDensity: integral is not 1");
    }
    if (!qm_compatible()) {
        throw IncompatibleDensityError("JointDensity: conditional violates the Born kernel");
    }
}

JointDensity JointDensity::from_marginal(const MarginalDensity& p) {
    p.validate();
    JointDensity joint{p.grid, std::vector<double>(p.grid.size()),
                       std::vector<double>(p.grid.size())};
    for (std::size_t k = 0; k < p.grid.size(); ++k) {
        const double theta = p.grid.theta_at(k);
        joint.plus[k] = born_conditional(+1, theta, 0.0) * p.values[k];
        joint.minus[k] = born_conditional(-1, theta, 0.0) * p.values[k];
    }
    return joint;
}

double expectation_sigma_z(const JointDensity& p) {
    return pairwise_sum(p.grid.size(), [&p](std::size_t k) {
        return p.grid.weight_at(k) * p.grid.u_at(k) * (p.plus[k] + p.minus[k]);
    });
}

double relative_entropy_marginal(const MarginalDensity& p, const MarginalDensity& m) {
    p.validate();
    m.validate();
    if (p.grid.size() != m.grid.size()) {
        throw std::invalid_argument("relative_entropy_marginal: grids differ");
    }
    for (double v : m.values) {
        if (!(v > 0.0)) {
            throw NonpositivePriorError("relative_entropy_marginal: prior has a nonpositive node");
        }
    }
    return -pairwise_sum(p.grid.size(), [&](std::size_t k) {
        const double pv = p.values[k];
        if (pv == 0.0) return 0.0; // 0*log(0) := 0
        return p.grid.weight_at(k) * pv * std::log(pv / m.values[k]);
    });
}

double relative_entropy_joint(const JointDensity& p, const JointDensity& m) {
    p.validate();
    m.validate();
    if (p.grid.size() != m.grid.size()) {
        throw std::invalid_argument("relative_entropy_joint: grids differ");
    }
    for (std::size_t k = 0; k < m.grid.size(); ++k) {
        if (!(m.plus[k] + m.minus[k] > 0.0)) {
            throw NonpositivePriorError("relative_entropy_joint: prior marginal has a nonpositive node");
        }
    }
    return -pairwise_sum(2 * p.grid.size(), [&](std::size_t k) {
        const std::size_t node = k % p.grid.size();
        const double pv = k < p.grid.size() ? p.plus[node] : p.minus[node];
        const double mv = k < p.grid.size() ? m.plus[node] : m.minus[node];
        if (pv == 0.0) return 0.0;
        return p.grid.weight_at(node) * pv * std::log(pv / mv);
    });
}

double partition_function(double lambda, const SphericalGrid& grid) {
    ConstraintGrid cg{grid, std::vector<double>(grid.size(), kUniformPrior)};
    return std::exp(log_partition(cg, lambda));
}

LagrangeSolution solve_lambda(double sigma_z, double tol, const SolverOptions& options) {
    if (!std::isfinite(sigma_z) || std::abs(sigma_z) > 1.0 - 1e-9) {
        throw TargetOutOfRangeError(
            "solve_lambda: |sigma_z| must be <= 1 - 1e-9 (lambda diverges at the pure-state "
            "endpoints; use von_neumann_check for those)");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("solve_lambda: tol must be positive");
    }
    const auto prior = options.prior ? options.prior : uniform_prior_fn();
    const int base = std::max(2, options.n_theta);
    const int n_phi = std::max(1, options.n_phi);

    int n_theta = base;
    for (int refinement = 0;; ++refinement) {
        ConstraintGrid cg = build_constraint_grid(n_theta, n_phi, prior);
        auto residual_at = [&](double lambda) {
            return constraint_expectation(cg, lambda) - sigma_z;
        };

        // The expectation is strictly decreasing in lambda, so a sign
        // change brackets the unique root. Expand until bracketed.
        double lo = -75.0;
        double hi = 75.0;
        while (residual_at(lo) < 0.0 || residual_at(hi) > 0.0) {
            lo *= 2.0;
            hi *= 2.0;
            if (hi > 1e9) {
                throw NoConvergenceError("solve_lambda: failed to bracket the multiplier");
            }
        }

        double f_lo = residual_at(lo);
        for (int iter = 0; iter < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() *
                                                        std::max(1.0, std::abs(lo));
             ++iter) {
            const double mid = 0.5 * (lo + hi);
            const double f_mid = residual_at(mid);
            if ((f_lo > 0.0) == (f_mid > 0.0)) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }

        double lambda = 0.5 * (lo + hi);
        double residual = residual_at(lambda);
        // Secant polish on the bisection estimate.
        double prev = lo;
        double f_prev = f_lo;
        for (int iter = 0; iter < 12 && std::abs(residual) > tol; ++iter) {
            const double denom = residual - f_prev;
            if (denom == 0.0) break;
            const double next = lambda - residual * (lambda - prev) / denom;
            if (!std::isfinite(next)) break;
            prev = lambda;
            f_prev = residual;
            lambda = next;
            residual = residual_at(lambda);
        }

        const int needed = nodes_for_lambda(1.25 * std::abs(lambda), base);
        if (needed > n_theta) {
            if (needed > kMaxSolverNodes) {
                throw NoConvergenceError(
                    "solve_lambda: |lambda| too large for the internal quadrature to resolve");
            }
            n_theta = needed;
            continue;
        }
        if (std::abs(residual) > tol) {
            throw NoConvergenceError("solve_lambda: residual refinement stalled");
        }

        const double log_z = log_partition(cg, lambda);
        return LagrangeSolution{lambda, std::exp(log_z), log_z, sigma_z, std::abs(residual)};
    }
}

JointDensity maxent_density(const LagrangeSolution& solution, const SphericalGrid& grid) {
    return maxent_density(solution, MarginalDensity::uniform(grid));
}

JointDensity maxent_density(const LagrangeSolution& solution, const MarginalDensity& prior) {
    const SphericalGrid& grid = prior.grid;
    const double lambda = solution.lambda;
    double max_exponent = -std::numeric_limits<double>::infinity();
    for (double u : grid.u_nodes) {
        max_exponent = std::max(max_exponent, -lambda * u);
    }
    MarginalDensity p{grid, std::vector<double>(grid.size())};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        p.values[k] = prior.values[k] * std::exp(-lambda * grid.u_at(k) - max_exponent);
    }
    const double norm = p.integral();
    for (double& v : p.values) v /= norm;
    return JointDensity::from_marginal(p);
}

DensityMatrix reconstruct_density_matrix(const JointDensity& p) {
    p.validate();
    const SphericalGrid& grid = p.grid;
    const std::size_t n = grid.size();

    // Per-node projector entries; the r sum runs over the two blocks of a
    // fixed-order virtual array so the reduction order never varies.
    std::vector<DensityMatrix> node_projector;
    node_projector.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        node_projector.push_back(projector(
            state_from_direction(BlochDirection(grid.theta_at(k), grid.phi_at(k)))));
    }
    auto component = [&](int entry, bool imaginary) {
        return pairwise_sum(2 * n, [&](std::size_t k) {
            const std::size_t node = k % n;
            const double density = k < n ? p.plus[node] : p.minus[node];
            const Complex value = node_projector[node].entries[entry];
            return grid.weight_at(node) * density *
                   (imaginary ? value.imag() : value.real());
        });
    };

    std::array<Complex, 4> entries;
    for (int e = 0; e < 4; ++e) {
        entries[e] = Complex(component(e, false), component(e, true));
    }
    return DensityMatrix::from_entries(entries);
}

DensityMatrix von_neumann_check(double sigma_z) {
    if (!(std::abs(sigma_z) <= 1.0)) {
        throw TargetOutOfRangeError("von_neumann_check: |sigma_z| must be <= 1");
    }
    return DensityMatrix::from_entries(
        {Complex(0.5 * (1.0 + sigma_z)), 0.0, 0.0, Complex(0.5 * (1.0 - sigma_z))});
}

EstimationReport estimate_from_mean(double sigma_z, int n_theta, int n_phi, double tol) {
    const LagrangeSolution solution = solve_lambda(sigma_z, tol, SolverOptions{n_theta, 1, {}});
    const SphericalGrid grid = make_grid(n_theta, n_phi);
    const JointDensity density = maxent_density(solution, grid);
    const DensityMatrix rho = reconstruct_density_matrix(density);
    const double entropy =
        relative_entropy_marginal(density.marginal(), MarginalDensity::uniform(grid));
    // Residual on the report grid, so an (n_theta, n_phi) too coarse for
    // |lambda| shows up in the report instead of hiding behind the solver's
    // internally refined rule.
    const double residual = std::abs(expectation_sigma_z(density) - sigma_z);
    return EstimationReport{sigma_z, solution.lambda, solution.z, residual,
                            entropy, rho,             n_theta,    n_phi};
}

} // namespace qce
