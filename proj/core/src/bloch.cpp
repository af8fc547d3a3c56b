#include "qce/bloch.hpp"

#include <cmath>
#include <stdexcept>

namespace qce {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

// Amplitudes below this are treated as exactly zero when fixing the
// global phase, so pole states come out as exact basis vectors.
constexpr double kPhaseEps = 1e-12;

void require_outcome(int r) {
    if (r != 1 && r != -1) {
        throw std::invalid_argument("outcome must be +1 or -1");
    }
}

} // namespace

BlochDirection::BlochDirection(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi)) {
        throw std::invalid_argument("BlochDirection: angles must be finite");
    }
    theta = std::fmod(theta, kTwoPi);
    if (theta < 0.0) theta += kTwoPi;
    if (theta > kPi) {
        // (theta, phi) and (2*pi - theta, phi + pi) name the same point.
        theta = kTwoPi - theta;
        phi += kPi;
    }
    phi = std::fmod(phi, kTwoPi);
    if (phi < 0.0) phi += kTwoPi;
    if (theta == 0.0 || theta == kPi) phi = 0.0;
    theta_ = theta;
    phi_ = phi;
}

BlochDirection BlochDirection::antipode() const {
    return BlochDirection(kPi - theta_, phi_ + kPi);
}

std::array<double, 3> BlochDirection::unit_vector() const {
    const double st = std::sin(theta_);
    return {st * std::cos(phi_), st * std::sin(phi_), std::cos(theta_)};
}

BlochDirection z_axis() { return BlochDirection(0.0, 0.0); }
BlochDirection x_axis() { return BlochDirection(kPi / 2.0, 0.0); }
BlochDirection y_axis() { return BlochDirection(kPi / 2.0, kPi / 2.0); }

PureQubitState PureQubitState::from_amplitudes(Complex a_plus, Complex a_minus) {
    const double norm2 = std::norm(a_plus) + std::norm(a_minus);
    if (std::abs(norm2 - 1.0) > 1e-12) {
        throw std::invalid_argument("PureQubitState: amplitudes are not normalized");
    }
    const double norm = std::sqrt(norm2);
    a_plus /= norm;
    a_minus /= norm;
    if (std::abs(a_plus) > kPhaseEps) {
        const Complex phase = std::conj(a_plus) / std::abs(a_plus);
        a_plus = std::abs(a_plus);
        a_minus *= phase;
    } else {
        a_plus = 0.0;
        a_minus = std::abs(a_minus);
    }
    return {a_plus, a_minus};
}

Complex inner_product(const PureQubitState& a, const PureQubitState& b) {
    return std::conj(a.a_plus) * b.a_plus + std::conj(a.a_minus) * b.a_minus;
}

double DensityMatrix::trace_real() const {
    return entries[0].real() + entries[3].real();
}

std::array<double, 2> DensityMatrix::eigenvalues() const {
    // Closed form for the Hermitian 2x2 case.
    const double a = entries[0].real();
    const double d = entries[3].real();
    const double mean = 0.5 * (a + d);
    const double off = std::abs(entries[1]);
    const double radius = std::sqrt(0.25 * (a - d) * (a - d) + off * off);
    return {mean - radius, mean + radius};
}

DensityMatrix DensityMatrix::from_entries(const std::array<Complex, 4>& entries) {
    DensityMatrix rho{entries};
    rho.validate();
    return rho;
}

void DensityMatrix::validate() const {
    const double herm = std::max({std::abs(entries[0].imag()), std::abs(entries[3].imag()),
                                  std::abs(entries[1] - std::conj(entries[2]))});
    if (herm > 1e-10) {
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    }
    if (std::abs(trace_real() - 1.0) > 1e-10) {
        throw std::invalid_argument("DensityMatrix: trace is not 1");
    }
    if (eigenvalues()[0] < -1e-10) {
        throw std::invalid_argument("DensityMatrix: negative eigenvalue");
    }
}

TwoQubitState TwoQubitState::from_amplitudes(const std::array<Complex, 4>& amplitudes) {
    double norm2 = 0.0;
    for (const Complex& a : amplitudes) norm2 += std::norm(a);
    if (std::abs(norm2 - 1.0) > 1e-12) {
        throw std::invalid_argument("TwoQubitState: amplitudes are not normalized");
    }
    return {amplitudes};
}

TwoQubitState TwoQubitState::bell_state() {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return TwoQubitState::from_amplitudes({Complex(inv_sqrt2), 0.0, 0.0, Complex(inv_sqrt2)});
}

PureQubitState state_from_direction(const BlochDirection& n) {
    const double half = 0.5 * n.theta();
    const Complex a_plus = std::cos(half);
    const Complex a_minus = std::polar(std::sin(half), n.phi());
    return PureQubitState::from_amplitudes(a_plus, a_minus);
}

double transition_probability(const BlochDirection& prep, const BlochDirection& meas,
                              int outcome) {
    require_outcome(outcome);
    const PureQubitState prepared = state_from_direction(prep);
    const PureQubitState measured =
        state_from_direction(outcome == 1 ? meas : meas.antipode());
    return std::norm(inner_product(measured, prepared));
}

double born_conditional(int r, double theta, double /*phi*/) {
    require_outcome(r);
    if (!(theta >= 0.0 && theta <= kPi)) {
        throw std::invalid_argument("born_conditional: theta must lie in [0, pi]");
    }
    // The conditional does not depend on the azimuth; evaluate at phi = 0.
    const PureQubitState s = state_from_direction(BlochDirection(theta, 0.0));
    return r == 1 ? std::norm(s.a_plus) : std::norm(s.a_minus);
}

double bell_joint_probability(const BlochDirection& a, const BlochDirection& b,
                              int ra, int rb) {
    require_outcome(ra);
    require_outcome(rb);
    const PureQubitState sa = state_from_direction(ra == 1 ? a : a.antipode());
    const PureQubitState sb = state_from_direction(rb == 1 ? b : b.antipode());
    const TwoQubitState psi = TwoQubitState::bell_state();
    // <sa| <sb| psi> over the product basis.
    const std::array<Complex, 2> ca{std::conj(sa.a_plus), std::conj(sa.a_minus)};
    const std::array<Complex, 2> cb{std::conj(sb.a_plus), std::conj(sb.a_minus)};
    Complex amp = 0.0;
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            amp += ca[j] * cb[k] * psi.amplitudes[2 * j + k];
        }
    }
    return std::norm(amp);
}

DensityMatrix projector(const PureQubitState& s) {
    return DensityMatrix::from_entries({
        s.a_plus * std::conj(s.a_plus),
        s.a_plus * std::conj(s.a_minus),
        s.a_minus * std::conj(s.a_plus),
        s.a_minus * std::conj(s.a_minus),
    });
}

} // namespace qce
