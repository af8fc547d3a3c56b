// Exact single- and two-qubit mathematics: Bloch-sphere directions, pure
// states, 2x2 density matrices, Born-rule probabilities, and the Bell-state
// kernel. All probabilities are computed by explicit complex arithmetic so
// the usual trigonometric shortcuts (cos^2 of half the angle between
// directions, etc.) stay available as independent test assertions.

#pragma once

#include <array>
#include <complex>

namespace qce {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Unit direction on the Bloch sphere. Construction canonicalizes:
// theta in [0, pi], phi in [0, 2*pi), and phi = 0 at the poles where the
// azimuth is degenerate, so equality is plain component comparison.
class BlochDirection {
public:
    BlochDirection(double theta, double phi);

    double theta() const { return theta_; }
    double phi() const { return phi_; }

    // Opposite point on the sphere; labels the -1 eigenstate of this axis.
    BlochDirection antipode() const;

    // Cartesian unit vector (x, y, z) in right-handed coordinates.
    std::array<double, 3> unit_vector() const;

    friend bool operator==(const BlochDirection&, const BlochDirection&) = default;

private:
    double theta_;
    double phi_;
};

BlochDirection z_axis();
BlochDirection x_axis();
BlochDirection y_axis();

// Pure qubit state in the sigma_z eigenbasis, unit norm, canonical global
// phase: a_plus real and >= 0, or a_minus real and > 0 when a_plus is 0.
struct PureQubitState {
    Complex a_plus;
    Complex a_minus;

    // Validates the norm (within 1e-12), renormalizes exactly, and rotates
    // the global phase into canonical form.
    static PureQubitState from_amplitudes(Complex a_plus, Complex a_minus);
};

// <a|b>
Complex inner_product(const PureQubitState& a, const PureQubitState& b);

// 2x2 complex matrix, row-major. Hermitian within 1e-10, unit trace within
// 1e-10, eigenvalues >= -1e-10.
struct DensityMatrix {
    std::array<Complex, 4> entries; // (00, 01, 10, 11)

    Complex operator()(int row, int col) const { return entries[2 * row + col]; }

    double trace_real() const;
    // Eigenvalues of the Hermitian part, ascending.
    std::array<double, 2> eigenvalues() const;

    static DensityMatrix from_entries(const std::array<Complex, 4>& entries);
    void validate() const;
};

// Two-qubit state in the product sigma_z basis (|++>, |+->, |-+>, |-->
// component order), unit norm.
struct TwoQubitState {
    std::array<Complex, 4> amplitudes;

    static TwoQubitState from_amplitudes(const std::array<Complex, 4>& amplitudes);
    // (|z+>|z+> + |z->|z->)/sqrt(2)
    static TwoQubitState bell_state();
};

// The +1 eigenstate of n.(sigma_x, sigma_y, sigma_z):
// cos(theta/2)|z+> + e^{i phi} sin(theta/2)|z->.
PureQubitState state_from_direction(const BlochDirection& n);

// |<meas,outcome | prep,+>|^2. outcome is +1 or -1.
double transition_probability(const BlochDirection& prep, const BlochDirection& meas,
                              int outcome);

// Born conditional q(r|theta,phi) for a sigma_z measurement: the
// probability of outcome r given the preparation direction (theta, phi).
// Independent of phi by construction.
double born_conditional(int r, double theta, double phi);

// |<a,ra| <b,rb| psi>|^2 for the Bell state.
double bell_joint_probability(const BlochDirection& a, const BlochDirection& b,
                              int ra, int rb);

// Rank-1 projector |s><s|.
DensityMatrix projector(const PureQubitState& s);

} // namespace qce
