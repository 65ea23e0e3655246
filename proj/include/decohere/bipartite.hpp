#pragma once

#include <vector>

#include "decohere/hilbert.hpp"

namespace decohere {

/// Factorization m x n of a composite space. Composite index of |i> (x) |j> is i * n + j.
struct Dims {
    Eigen::Index left;
    Eigen::Index right;
    Eigen::Index total() const { return left * right; }
};

enum class Side { Left, Right };

/// Pure state of a composite system, psi = sum c_mn phi_m (x) Phi_n.
class BipartiteState {
public:
    explicit BipartiteState(ComplexMatrix coeffs, const Tolerances& tol = kDefaultTol);

    static BipartiteState from_vector(const ComplexVector& v, Dims dims);
    static BipartiteState product(const StateVector& left, const StateVector& right);

    const ComplexMatrix& coeffs() const { return c_; }
    Dims dims() const { return {c_.rows(), c_.cols()}; }
    ComplexVector vector() const;
    StateVector state() const { return StateVector(vector()); }
    DensityMatrix density() const;

private:
    ComplexMatrix c_;
};

struct SchmidtDecomposition {
    RealVector probs;          // descending
    ComplexMatrix left_basis;  // columns phi~_k
    ComplexMatrix right_basis; // columns Phi~_k

    Eigen::Index rank() const { return probs.size(); }
    /// sum sqrt(p_k) phi~_k (x) Phi~_k
    ComplexVector reconstruct() const;
};

/// Reduced density matrix of the kept side. Works on raw matrices so that
/// superoperator construction can feed it non-physical basis elements.
ComplexMatrix partial_trace_raw(const ComplexMatrix& rho, Dims dims, Side keep);

DensityMatrix partial_trace(const BipartiteState& state, Side keep);
DensityMatrix partial_trace(const DensityMatrix& rho, Dims dims, Side keep);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Singular-value form of the coefficient matrix. Weights below sqrt(tol.psd)
/// in amplitude are dropped. The phase of each term is absorbed into the
/// right-hand basis vector so all coefficients are real and positive.
SchmidtDecomposition schmidt_decompose(const BipartiteState& state,
                                       const Tolerances& tol = kDefaultTol);

struct PremeasureOptions {
    /// Columns are the measured basis phi_n; empty means computational basis.
    ComplexMatrix measured_basis;
    /// Columns are the post-measurement system states phi'_n (non-ideal
    /// measurement); empty means phi'_n = phi_n.
    ComplexMatrix final_basis;
};

/// Unitary U = sum_n |phi'_n><phi_n| (x) V_n on system (x) apparatus, with
/// V_n a reflection taking the ready state to the n-th pointer state.
ComplexMatrix premeasurement_unitary(const std::vector<StateVector>& pointer_states,
                                     const StateVector& ready,
                                     const PremeasureOptions& options = {});

/// (sum c_n phi_n) (x) Phi_0  ->  sum c_n phi'_n (x) Phi_n
BipartiteState premeasure(const StateVector& system, const std::vector<StateVector>& pointer_states,
                          const StateVector& ready, const PremeasureOptions& options = {});

/// sum_k p_k |phi~_k><phi~_k| (x) |Phi~_k><Phi~_k| from the Schmidt form.
DensityMatrix classical_projection(const BipartiteState& state,
                                   const Tolerances& tol = kDefaultTol);

/// Transpose on the right factor.
ComplexMatrix partial_transpose(const ComplexMatrix& rho, Dims dims);

struct PptVerdict {
    bool entangled;        // partial transpose has an eigenvalue < -tol.psd
    bool decisive;         // dims are 2x2 or 2x3, where PPT is also sufficient
    double min_eigenvalue;
};

PptVerdict is_entangled_ppt(const DensityMatrix& rho, Dims dims,
                            const Tolerances& tol = kDefaultTol);

}  // namespace decohere
