#include "ctmatrix/kinematics.hpp"

#include <cmath>
#include <limits>

namespace ctm {

TwoBodySystem TwoBodySystem::make(double reduced_mass, double charge_product, double hbar) {
    if (!(reduced_mass > 0.0))
        fail(errc::out_of_range, "reduced mass must be positive");
    if (!(hbar > 0.0))
        fail(errc::out_of_range, "hbar must be positive");
    if (!(charge_product != 0.0) || !std::isfinite(charge_product))
        fail(errc::out_of_range,
             "charge product must be finite and nonzero (use free_particle for q1q2 = 0)");
    return TwoBodySystem{reduced_mass, charge_product, hbar, false};
}

TwoBodySystem TwoBodySystem::natural(double charge_product) {
    return make(1.0, charge_product, 1.0);
}

TwoBodySystem TwoBodySystem::free_particle(double reduced_mass, double hbar) {
    if (!(reduced_mass > 0.0))
        fail(errc::out_of_range, "reduced mass must be positive");
    if (!(hbar > 0.0))
        fail(errc::out_of_range, "hbar must be positive");
    return TwoBodySystem{reduced_mass, 0.0, hbar, true};
}

EnergyState make_energy_state(const TwoBodySystem& system, double energy) {
    if (!(energy < 0.0))
        fail(errc::non_negative_energy, "bound-state kinematics require E < 0");
    const double kappa = std::sqrt(-2.0 * system.reduced_mass * energy) / system.hbar;
    const double gamma =
        system.free ? 0.0
                    : system.reduced_mass * system.charge_product / (system.hbar * system.hbar * kappa);
    return EnergyState{system, energy, kappa, gamma};
}

EnergyState dimensionless_state(double gamma, double kappa) {
    if (!(kappa > 0.0))
        fail(errc::out_of_range, "kappa must be positive");
    if (!std::isfinite(gamma))
        fail(errc::out_of_range, "gamma must be finite");
    TwoBodySystem sys = gamma == 0.0 ? TwoBodySystem::free_particle()
                                     : TwoBodySystem::natural(gamma * kappa);
    EnergyState st{sys, -0.5 * kappa * kappa, kappa, gamma};
    return st; // gamma is stored as given, not re-derived, so it is exact
}

FockPoint make_fock_point(const EnergyState& state, double k, double k_prime, double cos_theta) {
    if (!(k > 0.0) || !std::isfinite(k) || !(k_prime > 0.0) || !std::isfinite(k_prime))
        fail(errc::out_of_range, "momenta must be positive and finite");
    if (!(cos_theta >= -1.0 && cos_theta <= 1.0))
        fail(errc::out_of_range, "cos_theta must lie in [-1, 1]");

    const double kap2 = state.kappa * state.kappa;
    const double kk = k * k_prime;

    // |k - k'|^2 without forward cancellation; both addends are >= 0.
    const double d2 = (k - k_prime) * (k - k_prime) + 2.0 * kk * (1.0 - cos_theta);

    // (k^2+kappa^2)(k'^2+kappa^2) - kappa^2 |k-k'|^2
    //   = (k k' - kappa^2)^2 + 2 kappa^2 k k' (1 + cos_theta),
    // again a sum of nonnegative pieces, so the half-angle tangent
    //   tan(omega/2) = sqrt(kappa^2 d2 / complement)
    // is formed from two well-conditioned square roots.  atan2 handles the
    // backward boundary (complement = 0 -> omega = pi) exactly.
    const double shell = kk - kap2;
    const double complement = shell * shell + 2.0 * kap2 * kk * (1.0 + cos_theta);
    const double num = kap2 * d2;
    const double omega = 2.0 * std::atan2(std::sqrt(num), std::sqrt(complement));

    const double denom = (k * k + kap2) * (k_prime * k_prime + kap2);
    const double s2 = num / denom;
    if (s2 > 1.0 + 4.0 * std::numeric_limits<double>::epsilon())
        fail(errc::internal_failure, "sin^2(omega/2) exceeded 1 beyond rounding allowance");

    double eta = 2.0 * kap2 * kk / denom;
    if (eta > 0.5)
        eta = 0.5; // AM-GM bound; overshoot is pure rounding

    return FockPoint{k, k_prime, cos_theta, omega, eta};
}

double prefactor(const EnergyState& state, const FockPoint& point) {
    return 2.0 * M_PI * state.system.charge_product * point.eta / (point.k * point.k_prime);
}

double born_term(const EnergyState& state, const FockPoint& point) {
    if (point.omega == 0.0)
        fail(errc::forward_singularity, "Born term diverges at omega = 0");
    const double s = std::sin(0.5 * point.omega);
    return prefactor(state, point) / (s * s);
}

double momentum_transfer_sq(double k, double k_prime, double cos_theta) {
    return (k - k_prime) * (k - k_prime) + 2.0 * k * k_prime * (1.0 - cos_theta);
}

} // namespace ctm
