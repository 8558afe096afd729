#pragma once

#include "ctmatrix/errors.hpp"

namespace ctm {

/*
 * Bound-state kinematics on the momentum sphere.
 *
 * A two-body system below threshold (E < 0) defines a momentum scale
 * kappa = sqrt(-2 mu E)/hbar and a strength parameter gamma = mu q1 q2 /
 * (hbar^2 kappa).  The stereographic map sends a pair of off-shell momenta
 * (k, k') with angle theta between them to a single arc length omega on the
 * unit 4-sphere:
 *
 *   sin^2(omega/2) = kappa^2 |k - k'|^2 / ((k^2+kappa^2)(k'^2+kappa^2))
 *   eta            = 2 kappa^2 k k'     / ((k^2+kappa^2)(k'^2+kappa^2))
 *
 * omega = 0 only at k = k' forward scattering; omega = pi is reachable only
 * when k k' = kappa^2 at cos(theta) = -1 and is treated as a valid limit
 * point.  eta peaks at 1/2, attained only at k = k' = kappa.
 */

struct TwoBodySystem {
    double reduced_mass;   // > 0
    double charge_product; // q1*q2, != 0 unless the free flag is set
    double hbar;           // > 0
    bool free = false;     // explicit opt-in for the non-interacting limit

    // Validates and builds.  A zero charge product is rejected unless `free`
    // is requested explicitly: a silent q1q2 = 0 nearly always means a caller
    // forgot to set the interaction.
    static TwoBodySystem make(double reduced_mass, double charge_product, double hbar);
    static TwoBodySystem natural(double charge_product); // mu = hbar = 1
    static TwoBodySystem free_particle(double reduced_mass = 1.0, double hbar = 1.0);
};

struct EnergyState {
    TwoBodySystem system;
    double energy; // < 0
    double kappa;  // sqrt(-2 mu E)/hbar
    double gamma;  // mu q1q2/(hbar^2 kappa); 0 in free mode
};

// Errors: non_negative_energy if energy >= 0.
EnergyState make_energy_state(const TwoBodySystem& system, double energy);

// Builds the state directly from the dimensionless strength gamma and the
// scale kappa (natural units mu = hbar = 1, so q1q2 = gamma*kappa).
// gamma = 0 produces a free system.
EnergyState dimensionless_state(double gamma, double kappa = 1.0);

struct FockPoint {
    double k;         // > 0
    double k_prime;   // > 0
    double cos_theta; // in [-1, 1]
    double omega;     // in [0, pi]
    double eta;       // in (0, 1/2]
};

// Reduces a momentum pair to sphere coordinates.  Exactly symmetric under
// k <-> k_prime (bit-for-bit: every intermediate is a symmetric expression).
// Errors: out_of_range for k <= 0, k' <= 0, |cos_theta| > 1, or if the
// internally computed sin^2(omega/2) exceeds 1 beyond a 4-ulp rounding
// allowance (internal_failure) -- the exact value is clamped into [0, 1].
FockPoint make_fock_point(const EnergyState& state, double k, double k_prime, double cos_theta);

// 2 pi q1q2 eta / (k k'), the overall scale shared by every representation.
double prefactor(const EnergyState& state, const FockPoint& point);

// First Born term 2 pi q1q2 eta / (k k' sin^2(omega/2)), identically equal to
// the momentum-space potential 4 pi q1q2 / |k - k'|^2.
// Errors: forward_singularity at omega = 0.
double born_term(const EnergyState& state, const FockPoint& point);

// |k - k'|^2 evaluated as (k-k')^2 + 2 k k' (1 - cos_theta): no cancellation
// in the forward region where k ~ k' and cos_theta ~ 1.
double momentum_transfer_sq(double k, double k_prime, double cos_theta);

} // namespace ctm
