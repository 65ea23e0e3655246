#pragma once

#include <functional>
#include <string>
#include <vector>

#include "decohere/bipartite.hpp"
#include "decohere/hilbert.hpp"

namespace decohere {

/// Column-stacking vectorization: vec(rho)[i + j*d] = rho(i, j), so that
/// vec(A X B) = (B^T (x) A) vec(X).
ComplexVector vectorize(const ComplexMatrix& rho);
ComplexMatrix unvectorize(const ComplexVector& v);

/// Linear map on d x d matrices, stored densely as a d^2 x d^2 matrix.
class Superoperator {
public:
    /// With trace_preserving set, the claim is checked on 10 random density
    /// matrices and InvariantError is thrown if it fails.
    explicit Superoperator(ComplexMatrix matrix, std::string label = {},
                           bool trace_preserving = false, const Tolerances& tol = kDefaultTol);

    static Superoperator identity(Eigen::Index dim);
    /// Builds the matrix column by column from the images of |i><j|.
    static Superoperator from_map(Eigen::Index dim,
                                  const std::function<ComplexMatrix(const ComplexMatrix&)>& map,
                                  std::string label = {});

    Eigen::Index dim() const { return dim_; }
    const ComplexMatrix& matrix() const { return m_; }
    const std::string& label() const { return label_; }
    bool trace_preserving() const { return trace_preserving_; }

    ComplexMatrix apply(const ComplexMatrix& rho) const;
    Superoperator then(const Superoperator& next) const;  // next o this

    /// Self-adjoint with respect to the Hilbert-Schmidt inner product.
    bool is_hermitian(double tol = 1e-10) const { return hermiticity_defect(m_) <= tol; }
    double idempotence_defect() const { return max_abs(m_ * m_ - m_); }

private:
    ComplexMatrix m_;
    Eigen::Index dim_;
    std::string label_;
    bool trace_preserving_;
};

/// L-hat with i d(rho)/dt = [H, rho] = L-hat rho.
Superoperator liouvillian(const Observable& h);
Superoperator left_multiplication(const ComplexMatrix& a);
Superoperator right_multiplication(const ComplexMatrix& b);

/// Complete set of mutually orthogonal hermitian projectors.
class SemidiagSpec {
public:
    explicit SemidiagSpec(std::vector<ComplexMatrix> projectors, const Tolerances& tol = kDefaultTol);

    /// Rank-one projectors onto the columns of an orthonormal basis.
    static SemidiagSpec rank_one(const ComplexMatrix& basis);
    static SemidiagSpec computational(Eigen::Index dim);

    Eigen::Index dim() const { return projectors_.front().rows(); }
    const std::vector<ComplexMatrix>& projectors() const { return projectors_; }

private:
    std::vector<ComplexMatrix> projectors_;
};

/// rho_phi (x) rho_Phi. Nonlinear in rho.
DensityMatrix project_sep(const DensityMatrix& rho, Dims dims);

/// Product of all single-factor marginals for a multipartite factorization
/// (repeated project_sep over the factor list).
DensityMatrix project_local(const DensityMatrix& rho, const std::vector<Eigen::Index>& factor_dims);

ComplexMatrix project_semidiag_raw(const ComplexMatrix& rho, const SemidiagSpec& spec);
DensityMatrix project_semidiag(const DensityMatrix& rho, const SemidiagSpec& spec);
Superoperator semidiag_superoperator(const SemidiagSpec& spec);

/// rho_phi (x) 1/n, a valid density matrix.
DensityMatrix project_sub(const DensityMatrix& rho, Dims dims);
/// Literal rho_phi (x) 1 with trace n; not a density matrix.
ComplexMatrix project_sub_literal(const DensityMatrix& rho, Dims dims);
ComplexMatrix project_sub_raw(const ComplexMatrix& rho, Dims dims, bool normalize);
Superoperator sub_superoperator(Dims dims, bool normalize = true);

/// rho_rel -> (P exp(-i L dt) rho_rel - rho_rel) / dt
Superoperator coarse_grained_generator(const Superoperator& liouvillian,
                                       const Superoperator& projector, double dt);

struct GeneratorScanPoint {
    double dt;
    Superoperator generator;
    double change_from_previous;  // max-abs difference to the previous dt, NaN for the first
};

/// Evaluates the coarse-grained generator for each dt in order, for choosing
/// a coarse-graining interval by convergence.
std::vector<GeneratorScanPoint> generator_dt_scan(const Superoperator& liouvillian,
                                                  const Superoperator& projector,
                                                  const std::vector<double>& dts);

using DensityMap = std::function<DensityMatrix(const DensityMatrix&)>;

/// S(P rho) - S(rho).
double entropy_change(const DensityMatrix& rho, const DensityMap& projection);

}  // namespace decohere
