#include "decohere/wigner.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>

namespace decohere {

namespace {

// Real trigonometric interpolation from n periodic samples to 2n; even rows
// are exactly the identity.
RealMatrix upsample_matrix(Eigen::Index n) {
    RealMatrix m(2 * n, n);
    for (Eigen::Index r = 0; r < 2 * n; ++r)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (r % 2 == 0) {
                m(r, j) = (r / 2 == j) ? 1.0 : 0.0;
                continue;
            }
            const double theta = 2.0 * std::numbers::pi * (0.5 * static_cast<double>(r) - static_cast<double>(j)) /
                                 static_cast<double>(n);
            double s = 1.0 + std::cos(0.5 * static_cast<double>(n) * theta);
            for (Eigen::Index k = 1; k < n / 2; ++k) s += 2.0 * std::cos(static_cast<double>(k) * theta);
            m(r, j) = s / static_cast<double>(n);
        }
    return m;
}

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("binary wigner: truncated input");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

}  // namespace

double WignerFunction::normalization() const { return values.sum() * grid.dp() * grid.dx(); }

RealVector WignerFunction::position_marginal() const { return values.colwise().sum().transpose() * grid.dp(); }

RealVector WignerFunction::momentum_marginal() const { return values.rowwise().sum() * grid.dx(); }

WignerFunction wigner_transform(const GridState& state) {
    const auto& g = state.grid();
    const auto n = g.size();
    const auto n2 = 2 * n;
    const ComplexMatrix m = upsample_matrix(n).cast<Complex>();
    const ComplexMatrix up = m * state.rho() * m.transpose();
    const double h = 0.5 * g.dx();

    // phase[l][k + n/2] = exp(2 pi i (l - n/2) k / n)
    ComplexMatrix phase(n, n);
    for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index k = -n / 2; k < n / 2; ++k) {
            const auto e = ((l - n / 2) * k) % n;
            phase(l, k + n / 2) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(n));
        }

    WignerFunction w{RealMatrix(n, n), g, 0.0};
    ComplexVector column(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = -n / 2; k < n / 2; ++k) {
            const Eigen::Index a = ((2 * j - k) % n2 + n2) % n2;
            const Eigen::Index b = ((2 * j + k) % n2 + n2) % n2;
            column[k + n / 2] = up(a, b);
        }
        const ComplexVector sums = phase * column;
        for (Eigen::Index l = 0; l < n; ++l) {
            const Complex nyquist = phase(l, 0) * column[0];
            w.imag_residue = std::max(w.imag_residue, std::abs((sums[l] - nyquist).imag()) * h / std::numbers::pi);
            w.values(l, j) = sums[l].real() * h / std::numbers::pi;
        }
    }
    return w;
}

double expectation_phase_space(const WignerFunction& w, const std::function<double(double p, double q)>& f) {
    const auto n = w.grid.size();
    double s = 0.0;
    for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index j = 0; j < n; ++j) s += f(w.grid.p(l), w.grid.x(j)) * w.values(l, j);
    return s * w.grid.dp() * w.grid.dx();
}

WignerFunction finite_interval_correction(const WignerFunction& w) {
    WignerFunction out = w;
    const RealVector mean = w.values.rowwise().mean();
    out.values.colwise() -= mean;
    return out;
}

void write_wigner_csv(std::ostream& os, const WignerFunction& w) {
    os << "p,q,W\n";
    os.precision(17);
    const auto n = w.grid.size();
    for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index j = 0; j < n; ++j)
            os << w.grid.p(l) << ',' << w.grid.x(j) << ',' << w.values(l, j) << '\n';
}

void write_wigner_binary(std::ostream& os, const WignerFunction& w) {
    const auto n = w.grid.size();
    put_u64(os, static_cast<std::uint64_t>(n));
    put_u64(os, std::bit_cast<std::uint64_t>(w.grid.length()));
    for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index j = 0; j < n; ++j) put_u64(os, std::bit_cast<std::uint64_t>(w.values(l, j)));
}

WignerFunction read_wigner_binary(std::istream& is) {
    const auto n = static_cast<Eigen::Index>(get_u64(is));
    const double length = std::bit_cast<double>(get_u64(is));
    WignerFunction w{RealMatrix(n, n), PhaseSpaceGrid(n, length), 0.0};
    for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index j = 0; j < n; ++j) w.values(l, j) = std::bit_cast<double>(get_u64(is));
    return w;
}

}  // namespace decohere
