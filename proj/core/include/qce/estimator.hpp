// Maximum-relative-entropy state estimation over Bloch-sphere configuration
// densities. Given an observed mean of sigma_z, solves the constrained
// problem for the exponential-family marginal p'(theta,phi) on a spherical
// quadrature grid, forms the joint density with the Born-rule conditional,
// and reconstructs the 2x2 density matrix by quadrature. The closed forms
// (Langevin function, sinh(lambda)/lambda, (I + s*sigma_z)/2) are reserved
// for tests; the implementation works on grid-evaluated integrals so it
// stays valid for non-uniform priors.

#pragma once

#include <functional>
#include <vector>

#include "qce/bloch.hpp"

namespace qce {

// Product quadrature rule over the sphere: Gauss-Legendre in u = cos(theta)
// on [-1, 1] (ascending nodes) times a uniform periodic rule in phi with
// weight 2*pi/n_phi. Node weights carry the sin(theta) measure, so plain
// weighted sums are solid-angle integrals and the total weight is 4*pi.
struct SphericalGrid {
    std::vector<double> u_nodes;    // ascending in u = cos(theta)
    std::vector<double> u_weights;
    std::vector<double> phi_nodes;  // ascending, 2*pi*k/n_phi
    double phi_weight;

    int n_theta() const { return static_cast<int>(u_nodes.size()); }
    int n_phi() const { return static_cast<int>(phi_nodes.size()); }
    std::size_t size() const { return u_nodes.size() * phi_nodes.size(); }

    // Flattened node index k = iu * n_phi + ip.
    double u_at(std::size_t k) const { return u_nodes[k / phi_nodes.size()]; }
    double phi_at(std::size_t k) const { return phi_nodes[k % phi_nodes.size()]; }
    double theta_at(std::size_t k) const;
    double weight_at(std::size_t k) const { return u_weights[k / phi_nodes.size()] * phi_weight; }

    double total_weight() const; // = 4*pi within rounding
};

// n_theta >= 2, n_phi >= 1.
SphericalGrid make_grid(int n_theta, int n_phi);

// Per-steradian density p(theta, phi) on the grid nodes.
struct MarginalDensity {
    SphericalGrid grid;
    std::vector<double> values;

    double integral() const;
    void validate() const; // values >= 0, integral 1 within 1e-8
    static MarginalDensity uniform(SphericalGrid grid); // 1/(4*pi)
};

// Joint density p~(theta, phi, r) for r = +1/-1. QM-compatible: the
// conditional p~(+)/(p~(+) + p~(-)) equals the Born kernel (1+u)/2 within
// 1e-10 wherever the marginal exceeds 1e-14.
struct JointDensity {
    SphericalGrid grid;
    std::vector<double> plus;
    std::vector<double> minus;

    MarginalDensity marginal() const;
    double integral() const; // summed over r
    void validate() const;
    bool qm_compatible() const;

    // p~(r) = q(r|theta,phi) * p with the Born conditional.
    static JointDensity from_marginal(const MarginalDensity& p);
};

struct LagrangeSolution {
    double lambda;
    double z;              // partition value; +inf if it overflows double
    double log_z;
    double sigma_z_target;
    double residual;       // |<sigma_z> - target| on the solver grid
};

struct SolverOptions {
    int n_theta = 64;
    int n_phi = 1;
    // Positive prior density m(theta, phi); uniform 1/(4*pi) when absent.
    // Must be evaluable at arbitrary nodes so the solver can refine its
    // internal grid for large |lambda|.
    std::function<double(double theta, double phi)> prior;
};

// <sigma_z> of a joint density: the solid-angle integral of cos(theta)
// times the marginal.
double expectation_sigma_z(const JointDensity& p);

// -integral of p*log(p/m): <= 0, maximal (= 0) at p = m. Throws
// NonpositivePriorError if m is not strictly positive on the grid.
double relative_entropy_marginal(const MarginalDensity& p, const MarginalDensity& m);

// Same functional over joints. Both arguments must be QM-compatible
// (IncompatibleDensityError otherwise); the value then equals the marginal
// relative entropy.
double relative_entropy_joint(const JointDensity& p, const JointDensity& m);

// Z(lambda) = integral of m * exp(-lambda*cos(theta)) over the sphere,
// uniform prior. Returns +inf if the value overflows double.
double partition_function(double lambda, const SphericalGrid& grid);

// Finds lambda such that the grid expectation of cos(theta) under
// p' ~ m * exp(-lambda*cos(theta)) equals sigma_z within tol. Bracketed
// bisection with secant refinement; the internal theta-grid is refined
// beyond options.n_theta when |lambda| is too large for the base rule to
// resolve the exponential boundary layer. Throws TargetOutOfRangeError for
// |sigma_z| > 1 - 1e-9 and NoConvergenceError if bracketing or refinement
// fails.
LagrangeSolution solve_lambda(double sigma_z, double tol = 1e-12,
                              const SolverOptions& options = {});

// The constrained-maximum joint density q(r|theta,phi) * m/Z *
// exp(-lambda*cos(theta)) evaluated and normalized on `grid` (uniform
// prior). Accurate when the grid resolves |lambda|.
JointDensity maxent_density(const LagrangeSolution& solution, const SphericalGrid& grid);
JointDensity maxent_density(const LagrangeSolution& solution, const MarginalDensity& prior);

// rho = sum_r integral of p~(theta,phi,r) |theta,phi><theta,phi| dOmega.
DensityMatrix reconstruct_density_matrix(const JointDensity& p);

// Closed-form comparison target (I + sigma_z_bar * sigma_z)/2 for
// |sigma_z_bar| <= 1, pure-state endpoints included.
DensityMatrix von_neumann_check(double sigma_z);

struct EstimationReport {
    double sigma_z;
    double lambda;
    double z;
    double residual;
    double entropy; // relative entropy of the solution marginal vs uniform prior
    DensityMatrix rho;
    int n_theta;
    int n_phi;
};

// Full pipeline: solve, build the density on an (n_theta, n_phi) grid,
// reconstruct rho, evaluate the entropy.
EstimationReport estimate_from_mean(double sigma_z, int n_theta = 64, int n_phi = 8,
                                    double tol = 1e-12);

} // namespace qce
