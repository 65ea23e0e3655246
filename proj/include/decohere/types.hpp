#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace decohere {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr Complex kI{0.0, 1.0};

// Numerical tolerances shared by every module. Defaults are the library-wide
// contract; callers may tighten or loosen them per call.
struct Tolerances {
    double norm = 1e-12;   // state-vector norm, ensemble probability sum
    double trace = 1e-10;  // density-matrix unit trace
    double herm = 1e-10;   // ||A - A^dagger||_inf
    double psd = 1e-10;    // smallest admissible eigenvalue is -psd
    double rt = 1e-10;     // round trips and reconstructions
};

inline const Tolerances kDefaultTol{};

// Shape or dimension disagreement between arguments.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A constructed value failed one of its invariants (hermiticity, trace, ...).
// The message names the invariant.
class InvariantError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Parameters that would violate positivity of the density matrix.
class AdmissibilityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Integrator step too large or positivity lost during integration.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Largest absolute entry, the "infinity" norm used for tolerance checks.
inline double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const ComplexMatrix& m) {
    return max_abs(m - m.adjoint());
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) {
    return 0.5 * (m + m.adjoint());
}

// Pauli matrices in the basis {|0>, |1>} with sigma_z = diag(1, -1).
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
// sigma^- = |0><1|, lowering |1> (excited) to |0> (ground).
ComplexMatrix sigma_minus();
ComplexMatrix sigma_plus();

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

}  // namespace decohere
