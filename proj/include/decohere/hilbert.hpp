#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "decohere/types.hpp"

namespace decohere {

/// Normalized pure state in a d-dimensional Hilbert space.
class StateVector {
public:
    /// Throws InvariantError unless |norm - 1| <= tol.norm.
    explicit StateVector(ComplexVector amplitudes, const Tolerances& tol = kDefaultTol);

    /// Rescales to unit norm; throws InvariantError for a zero vector.
    static StateVector normalized(ComplexVector amplitudes);
    static StateVector basis(Eigen::Index dim, Eigen::Index k);

    Eigen::Index dim() const { return amps_.size(); }
    const ComplexVector& amplitudes() const { return amps_; }
    Complex operator[](Eigen::Index i) const { return amps_[i]; }
    Complex inner(const StateVector& other) const;
    ComplexMatrix projector() const { return amps_ * amps_.adjoint(); }

private:
    ComplexVector amps_;
};

/// Hermitian operator.
class Observable {
public:
    explicit Observable(ComplexMatrix matrix, const Tolerances& tol = kDefaultTol);

    Eigen::Index dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }

private:
    ComplexMatrix m_;
};

struct EnsembleMember {
    StateVector state;
    double probability;
};

/// Weighted set of pure states. Members may be non-orthogonal and overcomplete.
class Ensemble {
public:
    explicit Ensemble(std::vector<EnsembleMember> members, const Tolerances& tol = kDefaultTol);

    Eigen::Index dim() const { return members_.front().state.dim(); }
    const std::vector<EnsembleMember>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }

    /// -sum p ln p over the members (nats).
    double mixing_entropy() const;

private:
    std::vector<EnsembleMember> members_;
};

/// Where a density matrix came from. The distinction between a proper
/// mixture and a reduced (improper) one is bookkeeping only: operations
/// treat both identically.
enum class Provenance { FromEnsemble, Reduced, Direct };

const char* to_string(Provenance p);

struct DensityDiagnostics {
    double herm_defect;
    double trace_defect;
    double min_eigenvalue;
};

DensityDiagnostics diagnose_density(const ComplexMatrix& m);

/// Positive, unit-trace, hermitian operator. Validated on construction.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix matrix, Provenance provenance = Provenance::Direct,
                           const Tolerances& tol = kDefaultTol);

    static DensityMatrix pure(const StateVector& psi);
    static DensityMatrix maximally_mixed(Eigen::Index dim);

    Eigen::Index dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }
    Provenance provenance() const { return provenance_; }
    Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

    /// Ascending eigenvalues.
    RealVector eigenvalues() const;

private:
    ComplexMatrix m_;
    Provenance provenance_;
};

/// Throws InvariantError naming the first violated invariant.
void validate_density(const ComplexMatrix& m, const Tolerances& tol = kDefaultTol,
                      bool check_trace = true);

/// Eigen-decomposition with a reproducible gauge: eigenvalues descending,
/// degenerate blocks spanned by the Gram-Schmidt image of the computational
/// basis, first nonzero component of every vector real and positive.
struct SpectralDecomposition {
    RealVector values;
    ComplexMatrix vectors;  // columns
};

SpectralDecomposition canonical_eigen(const ComplexMatrix& hermitian, double degeneracy_tol = 1e-9);

/// Multiplies v by a phase so its first component with |c| > threshold is real positive.
void fix_phase(Eigen::Ref<ComplexVector> v, double threshold = 1e-12);

/// Orthonormal basis of span(columns of block), canonicalized as described above.
ComplexMatrix canonical_subspace_basis(const ComplexMatrix& block);

inline constexpr double kNatsToBits = 1.0 / std::numbers::ln2;

DensityMatrix density_from_ensemble(const Ensemble& e);

/// Trace(A rho). Throws InvariantError if the trace has an imaginary part above tol.herm.
double ensemble_expectation(const DensityMatrix& rho, const Observable& a,
                            const Tolerances& tol = kDefaultTol);

/// -Trace(rho ln rho) in nats, with 0 ln 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho, const Tolerances& tol = kDefaultTol);
double von_neumann_entropy(const ComplexMatrix& rho, const Tolerances& tol = kDefaultTol);

/// Trace(rho^2).
double purity(const DensityMatrix& rho);

/// Spectral ensemble; zero-probability members are dropped.
Ensemble eigen_ensemble(const DensityMatrix& rho, const Tolerances& tol = kDefaultTol);

/// exp(-i H dt) for hermitian H.
ComplexMatrix unitary_propagator(const Observable& h, double dt);

/// rho -> U rho U^dagger with U = exp(-i H dt).
DensityMatrix von_neumann_step(const DensityMatrix& rho, const Observable& h, double dt);

}  // namespace decohere
