#include "decohere/zwanzig.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "decohere/random.hpp"

namespace decohere {

ComplexVector vectorize(const ComplexMatrix& rho) {
    return Eigen::Map<const ComplexVector>(rho.data(), rho.size());
}

ComplexMatrix unvectorize(const ComplexVector& v) {
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (d * d != v.size()) throw DimensionError("unvectorize: length is not a perfect square");
    return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

Superoperator::Superoperator(ComplexMatrix matrix, std::string label, bool trace_preserving,
                             const Tolerances& tol)
    : m_(std::move(matrix)), label_(std::move(label)), trace_preserving_(trace_preserving) {
    if (m_.rows() != m_.cols()) throw DimensionError("superoperator: matrix not square");
    dim_ = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(m_.rows()))));
    if (dim_ * dim_ != m_.rows()) throw DimensionError("superoperator: size is not d^2");
    if (trace_preserving_) {
        Rng rng(0x5eed);
        for (int k = 0; k < 10; ++k) {
            const auto rho = random_density(dim_, rng);
            const Complex tr = apply(rho.matrix()).trace();
            if (std::abs(tr - Complex(1.0)) > tol.rt)
                throw InvariantError("superoperator '" + label_ + "': trace preservation violated");
        }
    }
}

Superoperator Superoperator::identity(Eigen::Index dim) {
    return Superoperator(ComplexMatrix::Identity(dim * dim, dim * dim), "identity", true);
}

Superoperator Superoperator::from_map(Eigen::Index dim,
                                      const std::function<ComplexMatrix(const ComplexMatrix&)>& map,
                                      std::string label) {
    ComplexMatrix m(dim * dim, dim * dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
            e(i, j) = 1.0;
            const ComplexMatrix image = map(e);
            if (image.rows() != dim || image.cols() != dim)
                throw DimensionError("superoperator: map changes the dimension");
            m.col(i + j * dim) = vectorize(image);
        }
    }
    return Superoperator(std::move(m), std::move(label));
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& rho) const {
    if (rho.rows() != dim_ || rho.cols() != dim_) throw DimensionError("superoperator: apply dimension mismatch");
    return unvectorize(m_ * vectorize(rho));
}

Superoperator Superoperator::then(const Superoperator& next) const {
    if (next.dim_ != dim_) throw DimensionError("superoperator: composition dimension mismatch");
    return Superoperator(next.m_ * m_, next.label_ + " o " + label_);
}

Superoperator left_multiplication(const ComplexMatrix& a) {
    return Superoperator(kron(ComplexMatrix::Identity(a.rows(), a.rows()), a), "left");
}

Superoperator right_multiplication(const ComplexMatrix& b) {
    return Superoperator(kron(ComplexMatrix(b.transpose()), ComplexMatrix::Identity(b.rows(), b.rows())),
                         "right");
}

Superoperator liouvillian(const Observable& h) {
    return Superoperator(left_multiplication(h.matrix()).matrix() - right_multiplication(h.matrix()).matrix(),
                         "liouvillian");
}

// ---------------------------------------------------------------------------

SemidiagSpec::SemidiagSpec(std::vector<ComplexMatrix> projectors, const Tolerances& tol)
    : projectors_(std::move(projectors)) {
    if (projectors_.empty()) throw DimensionError("semidiag spec: no projectors");
    const Eigen::Index d = projectors_.front().rows();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (std::size_t a = 0; a < projectors_.size(); ++a) {
        const auto& p = projectors_[a];
        if (p.rows() != d || p.cols() != d) throw DimensionError("semidiag spec: projector dimension mismatch");
        if (hermiticity_defect(p) > tol.rt) throw InvariantError("semidiag spec: projector not hermitian");
        for (std::size_t b = 0; b < projectors_.size(); ++b) {
            const ComplexMatrix prod = p * projectors_[b];
            const ComplexMatrix expected = a == b ? p : ComplexMatrix::Zero(d, d);
            if (max_abs(prod - expected) > tol.rt)
                throw InvariantError("semidiag spec: projectors not mutually orthogonal idempotents");
        }
        sum += p;
    }
    if (max_abs(sum - ComplexMatrix::Identity(d, d)) > tol.rt)
        throw InvariantError("semidiag spec: incomplete projector set (sum != identity)");
}

SemidiagSpec SemidiagSpec::rank_one(const ComplexMatrix& basis) {
    std::vector<ComplexMatrix> ps;
    for (Eigen::Index k = 0; k < basis.cols(); ++k) ps.push_back(basis.col(k) * basis.col(k).adjoint());
    return SemidiagSpec(std::move(ps));
}

SemidiagSpec SemidiagSpec::computational(Eigen::Index dim) {
    return rank_one(ComplexMatrix::Identity(dim, dim));
}

// ---------------------------------------------------------------------------

DensityMatrix project_sep(const DensityMatrix& rho, Dims dims) {
    const ComplexMatrix left = partial_trace_raw(rho.matrix(), dims, Side::Left);
    const ComplexMatrix right = partial_trace_raw(rho.matrix(), dims, Side::Right);
    return DensityMatrix(hermitian_part(kron(left, right)));
}

DensityMatrix project_local(const DensityMatrix& rho, const std::vector<Eigen::Index>& factor_dims) {
    Eigen::Index total = 1;
    for (auto d : factor_dims) total *= d;
    if (factor_dims.empty() || total != rho.dim())
        throw DimensionError("project_local: factor dimensions do not multiply to the state dimension");
    ComplexMatrix out = ComplexMatrix::Ones(1, 1);
    Eigen::Index before = 1;
    for (auto d : factor_dims) {
        const Eigen::Index after = total / (before * d);
        const ComplexMatrix head = partial_trace_raw(rho.matrix(), {before * d, after}, Side::Left);
        const ComplexMatrix marginal = partial_trace_raw(head, {before, d}, Side::Right);
        out = kron(out, marginal);
        before *= d;
    }
    return DensityMatrix(hermitian_part(out));
}

ComplexMatrix project_semidiag_raw(const ComplexMatrix& rho, const SemidiagSpec& spec) {
    if (rho.rows() != spec.dim()) throw DimensionError("project_semidiag: dimension mismatch");
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (const auto& p : spec.projectors()) out += p * rho * p;
    return out;
}

DensityMatrix project_semidiag(const DensityMatrix& rho, const SemidiagSpec& spec) {
    return DensityMatrix(hermitian_part(project_semidiag_raw(rho.matrix(), spec)), rho.provenance());
}

Superoperator semidiag_superoperator(const SemidiagSpec& spec) {
    auto s = Superoperator::from_map(
        spec.dim(), [&](const ComplexMatrix& x) { return project_semidiag_raw(x, spec); }, "semidiag");
    return Superoperator(s.matrix(), s.label(), true);
}

ComplexMatrix project_sub_raw(const ComplexMatrix& rho, Dims dims, bool normalize) {
    const ComplexMatrix left = partial_trace_raw(rho, dims, Side::Left);
    ComplexMatrix id = ComplexMatrix::Identity(dims.right, dims.right);
    if (normalize) id /= static_cast<double>(dims.right);
    return kron(left, id);
}

DensityMatrix project_sub(const DensityMatrix& rho, Dims dims) {
    return DensityMatrix(hermitian_part(project_sub_raw(rho.matrix(), dims, true)));
}

ComplexMatrix project_sub_literal(const DensityMatrix& rho, Dims dims) {
    return project_sub_raw(rho.matrix(), dims, false);
}

Superoperator sub_superoperator(Dims dims, bool normalize) {
    auto s = Superoperator::from_map(
        dims.total(), [&](const ComplexMatrix& x) { return project_sub_raw(x, dims, normalize); },
        normalize ? "sub" : "sub_literal");
    return Superoperator(s.matrix(), s.label(), normalize);
}

Superoperator coarse_grained_generator(const Superoperator& liouvillian, const Superoperator& projector,
                                       double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("coarse-grained generator: dt must be positive");
    if (liouvillian.dim() != projector.dim()) throw DimensionError("coarse-grained generator: dimension mismatch");
    const ComplexMatrix evolution = ((-kI * dt) * liouvillian.matrix()).exp();
    const auto n = liouvillian.matrix().rows();
    ComplexMatrix gen = (projector.matrix() * evolution - ComplexMatrix::Identity(n, n)) / dt;
    return Superoperator(std::move(gen), "coarse_grained");
}

std::vector<GeneratorScanPoint> generator_dt_scan(const Superoperator& liouvillian,
                                                  const Superoperator& projector,
                                                  const std::vector<double>& dts) {
    std::vector<GeneratorScanPoint> out;
    for (double dt : dts) {
        auto gen = coarse_grained_generator(liouvillian, projector, dt);
        const double change = out.empty() ? std::numeric_limits<double>::quiet_NaN()
                                          : max_abs(gen.matrix() - out.back().generator.matrix());
        out.push_back({dt, std::move(gen), change});
    }
    return out;
}

double entropy_change(const DensityMatrix& rho, const DensityMap& projection) {
    return von_neumann_entropy(projection(rho)) - von_neumann_entropy(rho);
}

}  // namespace decohere
