#include "decohere/hilbert.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace decohere {

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << 0, -kI, kI, 0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

ComplexMatrix sigma_minus() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

ComplexMatrix sigma_plus() { return sigma_minus().adjoint(); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
    return out;
}

// ---------------------------------------------------------------------------

StateVector::StateVector(ComplexVector amplitudes, const Tolerances& tol)
    : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0) throw DimensionError("state vector: empty amplitude vector");
    const double n = amps_.norm();
    if (std::abs(n - 1.0) > tol.norm) {
        std::ostringstream os;
        os << "state vector: norm invariant violated (|psi| = " << n << ")";
        throw InvariantError(os.str());
    }
}

StateVector StateVector::normalized(ComplexVector amplitudes) {
    const double n = amplitudes.norm();
    if (!(n > 0.0)) throw InvariantError("state vector: cannot normalize a zero vector");
    amplitudes /= n;
    return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(Eigen::Index dim, Eigen::Index k) {
    if (k < 0 || k >= dim) throw DimensionError("state vector: basis index out of range");
    ComplexVector v = ComplexVector::Zero(dim);
    v[k] = 1.0;
    return StateVector(std::move(v));
}

Complex StateVector::inner(const StateVector& other) const {
    if (other.dim() != dim()) throw DimensionError("state vector: inner product dimension mismatch");
    return amps_.dot(other.amps_);
}

Observable::Observable(ComplexMatrix matrix, const Tolerances& tol) : m_(std::move(matrix)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
        throw DimensionError("observable: matrix must be square and non-empty");
    if (hermiticity_defect(m_) > tol.herm) throw InvariantError("observable: hermiticity violated");
}

Ensemble::Ensemble(std::vector<EnsembleMember> members, const Tolerances& tol)
    : members_(std::move(members)) {
    if (members_.empty()) throw DimensionError("ensemble: no members");
    const auto d = members_.front().state.dim();
    double total = 0.0;
    for (const auto& m : members_) {
        if (m.state.dim() != d) throw DimensionError("ensemble: member dimension mismatch");
        if (m.probability < 0.0 || m.probability > 1.0 + tol.norm)
            throw InvariantError("ensemble: probability outside [0, 1]");
        total += m.probability;
    }
    if (std::abs(total - 1.0) > tol.norm) {
        std::ostringstream os;
        os << "ensemble: probabilities not normalized (sum = " << total << ")";
        throw InvariantError(os.str());
    }
}

double Ensemble::mixing_entropy() const {
    double s = 0.0;
    for (const auto& m : members_)
        if (m.probability > 0.0) s -= m.probability * std::log(m.probability);
    return s;
}

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::FromEnsemble: return "from_ensemble";
        case Provenance::Reduced: return "reduced";
        case Provenance::Direct: return "direct";
    }
    return "direct";
}

DensityDiagnostics diagnose_density(const ComplexMatrix& m) {
    DensityDiagnostics d{};
    d.herm_defect = hermiticity_defect(m);
    d.trace_defect = std::abs(m.trace() - Complex(1.0, 0.0));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
    return d;
}

void validate_density(const ComplexMatrix& m, const Tolerances& tol, bool check_trace) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw DimensionError("density matrix: must be square and non-empty");
    if (!m.allFinite()) throw InvariantError("density matrix: non-finite entries");
    const auto diag = diagnose_density(m);
    std::ostringstream os;
    if (diag.herm_defect > tol.herm) {
        os << "density matrix: hermiticity violated (defect " << diag.herm_defect << ")";
        throw InvariantError(os.str());
    }
    if (check_trace && diag.trace_defect > tol.trace) {
        os << "density matrix: unit trace violated (defect " << diag.trace_defect << ")";
        throw InvariantError(os.str());
    }
    if (diag.min_eigenvalue < -tol.psd) {
        os << "density matrix: positivity violated (min eigenvalue " << diag.min_eigenvalue << ")";
        throw InvariantError(os.str());
    }
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix, Provenance provenance, const Tolerances& tol)
    : m_(std::move(matrix)), provenance_(provenance) {
    validate_density(m_, tol);
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    return DensityMatrix(psi.projector(), Provenance::Direct);
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
    return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

RealVector DensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m_), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

// ---------------------------------------------------------------------------

void fix_phase(Eigen::Ref<ComplexVector> v, double threshold) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > threshold) {
            v *= std::conj(v[i]) / a;
            v[i] = a;
            return;
        }
    }
}

ComplexMatrix canonical_subspace_basis(const ComplexMatrix& block) {
    const Eigen::Index d = block.rows();
    const Eigen::Index k = block.cols();
    const ComplexMatrix proj = block * block.adjoint();
    ComplexMatrix out(d, k);
    Eigen::Index found = 0;
    for (Eigen::Index i = 0; i < d && found < k; ++i) {
        ComplexVector v = proj.col(i);
        for (Eigen::Index j = 0; j < found; ++j) v -= out.col(j) * out.col(j).dot(v);
        // second pass keeps the basis orthonormal to working precision
        for (Eigen::Index j = 0; j < found; ++j) v -= out.col(j) * out.col(j).dot(v);
        const double n = v.norm();
        if (n < 1e-6) continue;
        v /= n;
        fix_phase(v);
        out.col(found++) = v;
    }
    if (found < k) return block;  // numerically rank-deficient block; keep solver output
    return out;
}

SpectralDecomposition canonical_eigen(const ComplexMatrix& hermitian, double degeneracy_tol) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(hermitian));
    const Eigen::Index d = hermitian.rows();
    SpectralDecomposition out{RealVector(d), ComplexMatrix(d, d)};
    for (Eigen::Index i = 0; i < d; ++i) {
        out.values[i] = es.eigenvalues()[d - 1 - i];
        out.vectors.col(i) = es.eigenvectors().col(d - 1 - i);
    }
    Eigen::Index start = 0;
    while (start < d) {
        Eigen::Index end = start + 1;
        while (end < d && std::abs(out.values[end] - out.values[start]) <= degeneracy_tol) ++end;
        if (end - start > 1) {
            out.vectors.middleCols(start, end - start) =
                canonical_subspace_basis(out.vectors.middleCols(start, end - start));
        } else {
            fix_phase(out.vectors.col(start));
        }
        start = end;
    }
    return out;
}

// ---------------------------------------------------------------------------

DensityMatrix density_from_ensemble(const Ensemble& e) {
    const auto d = e.dim();
    ComplexMatrix rho = ComplexMatrix::Zero(d, d);
    for (const auto& m : e.members()) rho += m.probability * m.state.projector();
    return DensityMatrix(std::move(rho), Provenance::FromEnsemble);
}

double ensemble_expectation(const DensityMatrix& rho, const Observable& a, const Tolerances& tol) {
    if (a.dim() != rho.dim()) throw DimensionError("expectation: dimension mismatch");
    const Complex t = (a.matrix() * rho.matrix()).trace();
    if (std::abs(t.imag()) > tol.herm) throw InvariantError("expectation: imaginary trace");
    return t.real();
}

double von_neumann_entropy(const ComplexMatrix& rho, const Tolerances& tol) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(rho), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (double p : es.eigenvalues()) {
        if (p < -tol.psd) {
            std::ostringstream os;
            os << "entropy: negative eigenvalue " << p;
            throw InvariantError(os.str());
        }
        p = std::clamp(p, 0.0, 1.0);
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

double von_neumann_entropy(const DensityMatrix& rho, const Tolerances& tol) {
    return von_neumann_entropy(rho.matrix(), tol);
}

double purity(const DensityMatrix& rho) {
    // Trace(rho^2) = sum |rho_ij|^2 for hermitian rho
    return rho.matrix().squaredNorm();
}

Ensemble eigen_ensemble(const DensityMatrix& rho, const Tolerances& tol) {
    const auto spec = canonical_eigen(rho.matrix());
    std::vector<EnsembleMember> members;
    double total = 0.0;
    for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
        const double p = std::clamp(spec.values[i], 0.0, 1.0);
        if (p <= tol.psd) continue;
        members.push_back({StateVector::normalized(spec.vectors.col(i)), p});
        total += p;
    }
    // absorb round-off so the ensemble invariant holds exactly
    for (auto& m : members) m.probability /= total;
    return Ensemble(std::move(members));
}

ComplexMatrix unitary_propagator(const Observable& h, double dt) {
    const auto d = h.dim();
    if (d < 64) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(h.matrix()));
        ComplexVector phases(d);
        for (Eigen::Index i = 0; i < d; ++i) phases[i] = std::exp(-kI * es.eigenvalues()[i] * dt);
        return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    }
    const ComplexMatrix gen = (-kI * dt) * h.matrix();
    return gen.exp();
}

DensityMatrix von_neumann_step(const DensityMatrix& rho, const Observable& h, double dt) {
    if (h.dim() != rho.dim()) throw DimensionError("von Neumann step: dimension mismatch");
    if (!(dt > 0.0)) throw std::invalid_argument("von Neumann step: dt must be positive");
    const ComplexMatrix u = unitary_propagator(h, dt);
    return DensityMatrix(hermitian_part(u * rho.matrix() * u.adjoint()), rho.provenance());
}

}  // namespace decohere
