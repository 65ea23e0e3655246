#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "decohere/grid.hpp"
#include "decohere/hilbert.hpp"
#include "decohere/random.hpp"

namespace decohere {

/// Poisson-distributed Gaussian localization hits.
struct HitProcess {
    double rate = 0.0;   // hits per unit time
    double width = 1.0;  // localization width a
    std::uint64_t seed = 0;

    void validate() const;
    /// Dephasing rate of the hit-averaged master equation at separation d:
    /// rate (1 - exp(-d^2 / (4 a^2))).
    double decoherence_rate(double separation) const;
    /// Small-separation limit of decoherence_rate(d) / d^2, i.e. rate / (4 a^2).
    double lambda_eff() const;
};

/// Amplitudes psi(s, b) on a register whose first factor has positions x_s
/// (rows) and whose optional second factor b (columns) is not touched by hits.
/// Norm is sum |psi|^2 * measure.
struct HitRegister {
    RealVector positions;
    double measure = 1.0;  // dx on a grid, 1 for discrete sites
    double period = 0.0;   // > 0: distances use the minimum image

    static HitRegister on_grid(const PhaseSpaceGrid& grid);
    double distance(double a, double b) const;
};

struct HitEvent {
    double time = 0.0;
    double center = 0.0;
};

/// One GRW-style hit: x_s drawn from the position marginal, center
/// x_c = x_s + N(0, a^2 / 2), psi multiplied by exp(-(x - x_c)^2 / (2 a^2)) and
/// renormalized. Throws NumericalError if the surviving norm underflows.
HitEvent apply_hit(ComplexMatrix& psi, const HitRegister& reg, double width, Rng& rng, double time = 0.0);

/// Free-particle evolution on the grid, exact between hits (spectral).
class FreePropagator {
public:
    FreePropagator(const PhaseSpaceGrid& grid, double mass);  // infinite mass: identity
    void advance(ComplexVector& psi, double tau) const;

private:
    bool trivial_;
    ComplexMatrix modes_;
    RealVector energies_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<ComplexVector> states;  // normalized on the grid at each time
    std::vector<HitEvent> hits;
};

/// Samples states at t_k = k t / steps, k = 0..steps. Deterministic in process.seed.
Trajectory run_trajectory(const HitProcess& process, const ComplexVector& psi0, const PhaseSpaceGrid& grid,
                          double mass, double t, int steps);

/// Final state only, with the event list.
ComplexVector run_to(const HitProcess& process, const ComplexVector& psi0, const PhaseSpaceGrid& grid, double mass,
                     double t, std::vector<HitEvent>* hits = nullptr);

struct TrajectoryEnsembleReport {
    int n_traj = 0;
    GridState mean_rho;
    RealMatrix stderr_re;  // elementwise standard errors of the mean
    RealMatrix stderr_im;
    GridState master;      // deterministic hit-averaged master equation at the same t
    double max_deviation_from_master = 0.0;
    // max |mean - master| / stderr over elements with |master| >= 1e-3 max|master|
    double max_z_score = 0.0;
    std::vector<std::uint64_t> seeds;
    double elapsed_seconds = 0.0;
};

/// Trajectory k uses seed derive_seed(base_seed, k); summation order is fixed.
TrajectoryEnsembleReport ensemble_mean(const HitProcess& process, const ComplexVector& psi0,
                                       const PhaseSpaceGrid& grid, double mass, double t, int steps, int n_traj,
                                       std::uint64_t base_seed);

/// Cross-lobe coherence C = sum_{x_i < split <= x_j} rho_ij dx^2 and the population
/// left of split, averaged over trajectories and compared with the master equation.
struct CoherenceDecaySample {
    double t = 0.0;
    Complex coherence_mean;
    double coherence_stderr_re = 0.0;
    double coherence_stderr_im = 0.0;
    Complex coherence_master;
    double left_population_mean = 0.0;
    double left_population_stderr = 0.0;
    double left_population_master = 0.0;
    double coherence_z = 0.0;  // max over re/im of |mean - master| / stderr
    double population_z = 0.0;
};

struct CoherenceDecayReport {
    int n_traj = 0;
    double split = 0.0;
    std::vector<CoherenceDecaySample> samples;  // t_k = k t / steps, k = 0..steps
    double max_coherence_z = 0.0;
    double max_population_z = 0.0;
    std::vector<std::uint64_t> seeds;
    double elapsed_seconds = 0.0;
};

/// Same seeding as ensemble_mean.
CoherenceDecayReport coherence_decay(const HitProcess& process, const ComplexVector& psi0, const PhaseSpaceGrid& grid,
                                     double mass, double t, int steps, int n_traj, std::uint64_t base_seed,
                                     double split = 0.0);

/// Columns t, coherence_re, coherence_im, coherence_se, master_re, master_im,
/// left_population, left_population_se, left_population_master.
void write_coherence_decay_csv(std::ostream& os, const CoherenceDecayReport& rep);

/// Deterministic solution of the hit-averaged master equation
/// d rho_ij / dt = -i [T, rho]_ij - rate (1 - exp(-d_ij^2 / (4 a^2))) rho_ij.
GridState hit_master_evolve(const HitProcess& process, const GridState& state, double mass, double t, int steps);

/// Two-qubit demo: subsystem A has sites at -+separation/2 and receives hits;
/// B is a passive partner. Composite: unravel the global pure state and reduce
/// each trajectory. Subsystem: unravel members of the eigen-ensemble of rho_A.
struct SubsystemDemoReport {
    int n_traj = 0;
    ComplexMatrix mean_composite;  // mean reduced state of A
    ComplexMatrix mean_subsystem;
    double mean_z_score = 0.0;     // max elementwise |difference| / combined stderr
    double purity_composite = 0.0;  // mean trajectory purity of rho_A
    double purity_subsystem = 0.0;
    double purity_stderr_composite = 0.0;
    double purity_stderr_subsystem = 0.0;
    double purity_z_score = 0.0;
    double entropy_of_mean = 0.0;   // S(mean rho_A), composite pipeline
    double mean_entropy = 0.0;      // mean S(rho_A) over composite trajectories
    double max_trajectory_difference = 0.0;  // max over k of ||rho_A^comp(k) - rho_A^sub(k)||
};

SubsystemDemoReport subsystem_inconsistency_demo(const StateVector& global, const HitProcess& process,
                                                 double separation, double t, int n_traj);

}  // namespace decohere
