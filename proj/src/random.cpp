#include "decohere/random.hpp"

namespace decohere {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t counter) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

ComplexMatrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    ComplexMatrix g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = Complex(n01(rng), n01(rng));
    return g;
}

StateVector random_state(Eigen::Index dim, Rng& rng) {
    return StateVector::normalized(random_ginibre(dim, 1, rng).col(0));
}

ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng) {
    const ComplexMatrix g = random_ginibre(dim, dim, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double a = std::abs(r(i, i));
        if (a > 0.0) q.col(i) *= r(i, i) / a;
    }
    return q;
}

DensityMatrix random_density(Eigen::Index dim, Rng& rng, Eigen::Index rank) {
    if (rank <= 0) rank = dim;
    const ComplexMatrix g = random_ginibre(dim, rank, rng);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(hermitian_part(rho));
}

ComplexMatrix random_hermitian(Eigen::Index dim, Rng& rng, double scale) {
    return scale * hermitian_part(random_ginibre(dim, dim, rng));
}

}  // namespace decohere
