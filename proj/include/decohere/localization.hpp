#pragma once

#include <functional>
#include <limits>

#include "decohere/dynamics.hpp"
#include "decohere/grid.hpp"

namespace decohere {

/// How (x - x')^2 is measured on the periodic grid.
enum class DistanceConvention {
    MinimumImage,  // shortest periodic distance; continuous across the boundary.
                   // Keeps rho positive only while the state spans less than L/2.
    Linear,        // plain x_i - x_j, matching a multiplication operator x
};

/// Natural units, hbar = 1. An infinite mass switches the kinetic term off.
struct LocalizationParams {
    double mass = std::numeric_limits<double>::infinity();
    double lambda = 0.0;  // 1 / (length^2 time)
    DistanceConvention distance = DistanceConvention::MinimumImage;

    void validate() const;
};

/// Spectral -(1/2m) d^2/dx^2 on the periodic grid (real symmetric).
RealMatrix kinetic_matrix(const PhaseSpaceGrid& grid, double mass);

/// (x_i - x_j)^2 under the chosen convention.
RealMatrix separation_squared(const PhaseSpaceGrid& grid, DistanceConvention convention);

/// d(rho)/dt = -(i/2m)(d^2/dx'^2 - d^2/dx^2) rho - lambda (x - x')^2 rho
ComplexMatrix eq14_rhs(const LocalizationParams& params, const GridState& state, bool kinetic = true);

/// Spectral-radius bound of the generator, used by the stability guard.
double generator_rate_bound(const LocalizationParams& params, const PhaseSpaceGrid& grid, bool kinetic);

/// Smallest step count with rate * dt < max_rate_dt. The default is the
/// stability guard; RK4 reaches ~1e-7 relative accuracy near max_rate_dt = 0.02.
int min_stable_steps(const LocalizationParams& params, const PhaseSpaceGrid& grid, double t, bool kinetic,
                     double max_rate_dt = 0.1);

using GridObserver = std::function<void(double t, const ComplexMatrix& rho)>;

/// RK4 integration. Throws NumericalError if rate * dt >= 0.1.
GridState evolve(const LocalizationParams& params, const GridState& state, double t, int steps,
                 bool kinetic, const GridObserver& observer = {});

/// Same integrator for d(rho_ij)/dt = -i[T, rho]_ij - rates_ij rho_ij with an
/// arbitrary non-negative symmetric rate matrix (infinite mass: no kinetic term).
GridState evolve_with_rates(const RealMatrix& rates, double mass, const GridState& state, double t, int steps,
                            const GridObserver& observer = {});

/// Closed-form kinetic-free solution rho(x, x', t) = rho(x, x', 0) exp(-lambda (x - x')^2 t).
GridState analytic_dephasing(const LocalizationParams& params, const GridState& state, double t);

/// Lindblad model with H = kinetic matrix and the single generator sqrt(2 lambda) x.
/// Acts on grid matrices directly (no dx weighting is needed for commutators).
LindbladModel grid_lindblad_model(const LocalizationParams& params, const PhaseSpaceGrid& grid,
                                  bool kinetic = true);

/// Full width at 1/e of |rho(x0 + s/2, x0 - s/2)| as a function of s,
/// averaged over x0 with weight rho(x0, x0) dx. Throws NumericalError if the
/// width is below 4 dx or the profile never falls to 1/e within L/2.
double coherence_length(const GridState& state);

/// Order-of-magnitude estimate alpha Z^2 (d / (c t))^3 for the probability
/// that a charge separated by d for time t has radiated a photon.
double dipole_radiation_probability(double alpha, int charge, double separation, double time,
                                    double c = 1.0);

}  // namespace decohere
