#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "decohere/hilbert.hpp"
#include "decohere/zwanzig.hpp"

namespace decohere {

/// pi = Trace(sigma rho) for a two-level system.
class PolarizationVector {
public:
    /// Throws InvariantError if |pi| > 1 + tol.rt.
    explicit PolarizationVector(const Vec3& pi, const Tolerances& tol = kDefaultTol);
    /// No physicality check; for trajectories of inadmissible flows.
    static PolarizationVector unchecked(const Vec3& pi);

    const Vec3& vector() const { return pi_; }
    double norm() const { return pi_.norm(); }

private:
    PolarizationVector() = default;
    Vec3 pi_ = Vec3::Zero();
};

/// rho = (1 + sigma . pi) / 2
DensityMatrix rho_from_bloch(const PolarizationVector& pi);
PolarizationVector bloch_from_rho(const DensityMatrix& rho);

/// Trace-preserving map fixed by its action on 1 and sigma. On polarization
/// vectors it acts as pi -> A pi + pi0.
struct AffineMapSpec {
    Vec3 pi0 = Vec3::Zero();
    Mat3 a = Mat3::Identity();

    /// pi0 != 0: the map sends the unit matrix to a polarized state.
    bool creates_information(double tol = 1e-12) const { return pi0.norm() > tol; }
    /// A^2 = A and A pi0 = 0.
    bool is_idempotent(double tol = 1e-12) const;
    /// Self-adjoint under the Hilbert-Schmidt product: pi0 = 0 and A symmetric.
    bool is_hermitian(double tol = 1e-12) const;
    /// The same map as a 4 x 4 superoperator on 2 x 2 matrices.
    Superoperator superoperator() const;
};

PolarizationVector apply_affine_map(const AffineMapSpec& spec, const PolarizationVector& pi);

/// d pi/dt = omega x (pi - pi0) - sum_i gamma_i ((pi - pi0) . e_i) e_i
struct BlochParams {
    Vec3 omega = Vec3::Zero();
    Vec3 gamma = Vec3::Zero();
    Vec3 pi0 = Vec3::Zero();
    Mat3 basis = Mat3::Identity();  // columns e_i, orthonormal

    /// Validates the frame and the positivity admissibility conditions
    /// gamma_i >= 0 and |pi0| <= 1; throws AdmissibilityError otherwise.
    static BlochParams make(const Vec3& omega, const Vec3& gamma, const Vec3& pi0,
                            const Mat3& basis = Mat3::Identity());
    /// Frame check only. For reproducing positivity violations.
    static BlochParams unchecked(const Vec3& omega, const Vec3& gamma, const Vec3& pi0,
                                 const Mat3& basis = Mat3::Identity());

    bool admissible() const;
};

/// Throws AdmissibilityError naming the violated condition.
void require_admissible(const BlochParams& params);

Vec3 bloch_rhs(const BlochParams& params, const Vec3& pi);

struct BlochTrajectory {
    std::vector<double> times;
    std::vector<Vec3> states;
    /// First sampled time with |pi| > 1 + violation_tol, if any.
    std::optional<double> first_violation_time;

    const Vec3& final_state() const { return states.back(); }
};

/// Fixed-step RK4. Every step is recorded.
BlochTrajectory bloch_integrate(const BlochParams& params, const Vec3& initial, double t, int steps,
                                double violation_tol = 1e-8);

/// Columns t,pi1,pi2,pi3,norm with a header row.
void write_bloch_csv(std::ostream& os, const BlochTrajectory& traj);

/// Generator of the flow as a superoperator on 2 x 2 matrices.
Superoperator bloch_generator(const BlochParams& params);
/// exp(generator * t).
Superoperator bloch_propagator(const BlochParams& params, double t);
/// Smallest Choi eigenvalue of the propagator over a ladder of times
/// spanning the fastest and slowest rates. Nonnegative (within tolerance)
/// means the flow is completely positive.
double bloch_choi_min_eigenvalue(const BlochParams& params);

/// Generalized Gell-Mann matrices: n(n-1)/2 symmetric, n(n-1)/2
/// antisymmetric, then n-1 diagonal. Trace(G_a G_b) = 2 delta_ab.
std::vector<ComplexMatrix> su_n_generators(int n);

struct CoherenceVector {
    RealVector components;  // length n^2 - 1
    int n;
};

CoherenceVector coherence_vector(const DensityMatrix& rho);
/// rho = 1/n + (1/2) sum_a c_a G_a
DensityMatrix density_from_coherence(const CoherenceVector& cv);

}  // namespace decohere
