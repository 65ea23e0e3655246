#include "decohere/bipartite.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

namespace decohere {

namespace {

void require_dims(Eigen::Index total, Dims dims, const char* what) {
    if (dims.left <= 0 || dims.right <= 0 || dims.total() != total) {
        std::ostringstream os;
        os << what << ": dimension " << total << " does not factor as " << dims.left << " x "
           << dims.right;
        throw DimensionError(os.str());
    }
}

void require_orthonormal_columns(const ComplexMatrix& basis, const char* what) {
    const ComplexMatrix gram = basis.adjoint() * basis;
    if (max_abs(gram - ComplexMatrix::Identity(gram.rows(), gram.cols())) > 1e-10) {
        std::ostringstream os;
        os << what << ": not orthonormal";
        throw InvariantError(os.str());
    }
}

// Unitary V with V * from = to, for unit vectors.
ComplexMatrix reflection_to(const ComplexVector& from, const ComplexVector& to) {
    const Eigen::Index d = from.size();
    const Complex overlap = from.dot(to);  // <from|to>
    const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
    const ComplexVector target = std::conj(phase) * to;  // <from|target> is real and >= 0
    const ComplexVector u = from - target;
    const double n = u.norm();
    ComplexMatrix v = ComplexMatrix::Identity(d, d);
    if (n > 1e-14) {
        const ComplexVector w = u / n;
        v -= 2.0 * w * w.adjoint();
    }
    return phase * v;
}

}  // namespace

BipartiteState::BipartiteState(ComplexMatrix coeffs, const Tolerances& tol) : c_(std::move(coeffs)) {
    if (c_.size() == 0) throw DimensionError("bipartite state: empty coefficient matrix");
    const double n2 = c_.squaredNorm();
    if (std::abs(n2 - 1.0) > tol.norm) {
        std::ostringstream os;
        os << "bipartite state: normalization violated (sum |c|^2 = " << n2 << ")";
        throw InvariantError(os.str());
    }
}

BipartiteState BipartiteState::from_vector(const ComplexVector& v, Dims dims) {
    require_dims(v.size(), dims, "bipartite state");
    ComplexMatrix c(dims.left, dims.right);
    for (Eigen::Index i = 0; i < dims.left; ++i)
        for (Eigen::Index j = 0; j < dims.right; ++j) c(i, j) = v[i * dims.right + j];
    return BipartiteState(std::move(c));
}

BipartiteState BipartiteState::product(const StateVector& left, const StateVector& right) {
    return BipartiteState(left.amplitudes() * right.amplitudes().transpose());
}

ComplexVector BipartiteState::vector() const {
    ComplexVector v(c_.size());
    for (Eigen::Index i = 0; i < c_.rows(); ++i)
        for (Eigen::Index j = 0; j < c_.cols(); ++j) v[i * c_.cols() + j] = c_(i, j);
    return v;
}

DensityMatrix BipartiteState::density() const {
    const ComplexVector v = vector();
    return DensityMatrix(v * v.adjoint());
}

ComplexVector SchmidtDecomposition::reconstruct() const {
    const Eigen::Index m = left_basis.rows();
    const Eigen::Index n = right_basis.rows();
    ComplexVector v = ComplexVector::Zero(m * n);
    for (Eigen::Index k = 0; k < rank(); ++k)
        v += std::sqrt(probs[k]) * kron(ComplexVector(left_basis.col(k)), ComplexVector(right_basis.col(k)));
    return v;
}

// ---------------------------------------------------------------------------

ComplexMatrix partial_trace_raw(const ComplexMatrix& rho, Dims dims, Side keep) {
    if (rho.rows() != rho.cols()) throw DimensionError("partial trace: matrix not square");
    require_dims(rho.rows(), dims, "partial trace");
    const Eigen::Index m = dims.left;
    const Eigen::Index n = dims.right;
    if (keep == Side::Left) {
        ComplexMatrix out = ComplexMatrix::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index ip = 0; ip < m; ++ip)
                for (Eigen::Index j = 0; j < n; ++j) out(i, ip) += rho(i * n + j, ip * n + j);
        return out;
    }
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index jp = 0; jp < n; ++jp)
            for (Eigen::Index i = 0; i < m; ++i) out(j, jp) += rho(i * n + j, i * n + jp);
    return out;
}

DensityMatrix partial_trace(const BipartiteState& state, Side keep) {
    const ComplexMatrix& c = state.coeffs();
    // (rho_phi)_{mm'} = sum_n c_mn c*_m'n ; (rho_Phi)_{nn'} = sum_m c_mn c*_mn'
    ComplexMatrix r = keep == Side::Left ? ComplexMatrix(c * c.adjoint())
                                         : ComplexMatrix(c.transpose() * c.conjugate());
    return DensityMatrix(hermitian_part(r), Provenance::Reduced);
}

DensityMatrix partial_trace(const DensityMatrix& rho, Dims dims, Side keep) {
    return DensityMatrix(hermitian_part(partial_trace_raw(rho.matrix(), dims, keep)),
                         Provenance::Reduced);
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix(kron(a.matrix(), b.matrix()));
}

SchmidtDecomposition schmidt_decompose(const BipartiteState& state, const Tolerances& tol) {
    const ComplexMatrix& c = state.coeffs();
    Eigen::JacobiSVD<ComplexMatrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& s = svd.singularValues();
    const double cutoff = std::sqrt(tol.psd);
    Eigen::Index rank = 0;
    while (rank < s.size() && s[rank] > cutoff) ++rank;

    SchmidtDecomposition out;
    out.probs = s.head(rank).array().square();
    out.left_basis = svd.matrixU().leftCols(rank);

    // canonical gauge inside blocks of equal weight
    Eigen::Index start = 0;
    while (start < rank) {
        Eigen::Index end = start + 1;
        while (end < rank && std::abs(out.probs[end] - out.probs[start]) <= 1e-9) ++end;
        if (end - start > 1) {
            out.left_basis.middleCols(start, end - start) =
                canonical_subspace_basis(out.left_basis.middleCols(start, end - start));
        } else {
            fix_phase(out.left_basis.col(start));
        }
        start = end;
    }

    // Phi~_k = (phi~_k^dagger c)^T / sqrt(p_k) carries every phase
    out.right_basis.resize(c.cols(), rank);
    for (Eigen::Index k = 0; k < rank; ++k)
        out.right_basis.col(k) = (out.left_basis.col(k).adjoint() * c).transpose() / s[k];
    return out;
}

// ---------------------------------------------------------------------------

ComplexMatrix premeasurement_unitary(const std::vector<StateVector>& pointer_states,
                                     const StateVector& ready, const PremeasureOptions& options) {
    const Eigen::Index d = static_cast<Eigen::Index>(pointer_states.size());
    if (d == 0) throw DimensionError("premeasure: no pointer states");
    const Eigen::Index apparatus = ready.dim();
    ComplexMatrix pointers(apparatus, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        if (pointer_states[k].dim() != apparatus)
            throw DimensionError("premeasure: pointer state dimension differs from ready state");
        pointers.col(k) = pointer_states[k].amplitudes();
    }
    require_orthonormal_columns(pointers, "premeasure: pointer states");

    const ComplexMatrix measured = options.measured_basis.size() == 0
                                       ? ComplexMatrix(ComplexMatrix::Identity(d, d))
                                       : options.measured_basis;
    const ComplexMatrix final_basis = options.final_basis.size() == 0 ? measured : options.final_basis;
    if (measured.rows() != d || measured.cols() != d || final_basis.rows() != d ||
        final_basis.cols() != d)
        throw DimensionError("premeasure: basis must be d x d with d = number of pointer states");
    require_orthonormal_columns(measured, "premeasure: measured basis");
    require_orthonormal_columns(final_basis, "premeasure: final basis");

    ComplexMatrix u = ComplexMatrix::Zero(d * apparatus, d * apparatus);
    for (Eigen::Index k = 0; k < d; ++k) {
        const ComplexMatrix sys = final_basis.col(k) * measured.col(k).adjoint();
        u += kron(sys, reflection_to(ready.amplitudes(), pointers.col(k)));
    }
    return u;
}

BipartiteState premeasure(const StateVector& system, const std::vector<StateVector>& pointer_states,
                          const StateVector& ready, const PremeasureOptions& options) {
    if (system.dim() != static_cast<Eigen::Index>(pointer_states.size()))
        throw DimensionError("premeasure: need one pointer state per system basis state");
    const ComplexMatrix u = premeasurement_unitary(pointer_states, ready, options);
    const ComplexVector out = u * kron(system.amplitudes(), ready.amplitudes());
    return BipartiteState::from_vector(out / out.norm(), {system.dim(), ready.dim()});
}

DensityMatrix classical_projection(const BipartiteState& state, const Tolerances& tol) {
    const auto schmidt = schmidt_decompose(state, tol);
    const auto dims = state.dims();
    ComplexMatrix rho = ComplexMatrix::Zero(dims.total(), dims.total());
    const double total = schmidt.probs.sum();
    for (Eigen::Index k = 0; k < schmidt.rank(); ++k) {
        const ComplexVector phi = schmidt.left_basis.col(k);
        const ComplexVector Phi = schmidt.right_basis.col(k);
        rho += (schmidt.probs[k] / total) * kron(ComplexMatrix(phi * phi.adjoint()),
                                                 ComplexMatrix(Phi * Phi.adjoint()));
    }
    return DensityMatrix(hermitian_part(rho));
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, Dims dims) {
    require_dims(rho.rows(), dims, "partial transpose");
    const Eigen::Index m = dims.left;
    const Eigen::Index n = dims.right;
    ComplexMatrix out(rho.rows(), rho.cols());
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index ip = 0; ip < m; ++ip)
                for (Eigen::Index jp = 0; jp < n; ++jp)
                    out(i * n + j, ip * n + jp) = rho(i * n + jp, ip * n + j);
    return out;
}

PptVerdict is_entangled_ppt(const DensityMatrix& rho, Dims dims, const Tolerances& tol) {
    const ComplexMatrix pt = partial_transpose(rho.matrix(), dims);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(pt), Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    const bool decisive = dims.left == 1 || dims.right == 1 || dims.total() <= 6;
    return {min_eig < -tol.psd, decisive, min_eig};
}

}  // namespace decohere
