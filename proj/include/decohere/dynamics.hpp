#pragma once

#include <functional>
#include <vector>

#include "decohere/hilbert.hpp"
#include "decohere/zwanzig.hpp"

namespace decohere {

/// i d(rho)/dt = [H, rho] - (i/2) sum_k (L_k^dag L_k rho + rho L_k^dag L_k - 2 L_k rho L_k^dag)
class LindbladModel {
public:
    LindbladModel(Observable hamiltonian, std::vector<ComplexMatrix> generators);
    explicit LindbladModel(Eigen::Index dim);  // H = 0, no generators

    Eigen::Index dim() const { return h_.dim(); }
    const Observable& hamiltonian() const { return h_; }
    const std::vector<ComplexMatrix>& generators() const { return ls_; }

    /// Generator of d(rho)/dt = G rho as a column-stacked superoperator.
    Superoperator generator_superoperator() const;

private:
    Observable h_;
    std::vector<ComplexMatrix> ls_;
};

/// d(rho)/dt for an arbitrary (not necessarily physical) matrix.
ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& rho);
ComplexMatrix lindblad_rhs(const LindbladModel& model, const DensityMatrix& rho);

/// One classical RK4 step of size dt on the raw matrix.
ComplexMatrix rk4_step(const LindbladModel& model, const ComplexMatrix& rho, double dt);

struct IntegrationResult {
    DensityMatrix rho;
    double max_symmetrization_correction;  // largest ||(rho - rho^dag)/2||_inf removed in one step
    double min_eigenvalue;                 // smallest eigenvalue seen over the run
    double trace_drift;                    // |Tr rho(t) - Tr rho(0)|
};

using IntegrationObserver = std::function<void(double t, const ComplexMatrix& rho)>;

/// Fixed-step RK4 with re-symmetrization after every step. Throws
/// NumericalError if a step needs a symmetrization correction above 1e-6 or
/// the spectrum drops below -10 * tol.psd. The observer, if set, is called at
/// t = 0 and after every step.
IntegrationResult integrate_traced(const LindbladModel& model, const DensityMatrix& rho0, double t,
                                   int steps, const IntegrationObserver& observer = {},
                                   const Tolerances& tol = kDefaultTol);

DensityMatrix integrate(const LindbladModel& model, const DensityMatrix& rho0, double t, int steps);

/// ||rho(t; steps) - rho(t; 2 steps)||_inf, a step-size convergence check.
double step_halving_error(const LindbladModel& model, const DensityMatrix& rho0, double t, int steps);

/// Choi matrix C = sum_ij Phi(|i><j|) (x) |i><j|, i.e. (Phi (x) id)(|Omega><Omega|)
/// with the unnormalized |Omega> = sum_i |ii>.
ComplexMatrix choi_matrix(const Superoperator& map);
double choi_min_eigenvalue(const Superoperator& map);

struct PropagatorReport {
    Superoperator superoperator;
    double choi_min_eigenvalue;
    double trace_defect;           // |Tr Phi(1/d) - 1|
    bool is_information_creating;  // non-unital
};

/// Propagator Phi(t) built column by column by RK4 integration of each |i><j|.
PropagatorReport propagator(const LindbladModel& model, double t, int steps);

/// Same diagnostics for an arbitrary linear map (for example a transposition).
PropagatorReport analyze_map(const Superoperator& map);

/// Transposition rho -> rho^T, positive but not completely positive.
Superoperator transposition_map(Eigen::Index dim);

/// True iff the dissipator maps the unit matrix to something nonzero, i.e. iff
/// sum_k [L_k, L_k^dag] != 0. Both forms are evaluated; a disagreement throws
/// std::logic_error.
bool information_gain(const LindbladModel& model, const Tolerances& tol = kDefaultTol);

}  // namespace decohere
