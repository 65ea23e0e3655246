#include "decohere/localization.hpp"

#include <cmath>
#include <sstream>

namespace decohere {

void LocalizationParams::validate() const {
    if (!(mass > 0.0)) throw std::invalid_argument("localization: mass must be positive");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("localization: lambda must be finite and >= 0");
}

RealMatrix kinetic_matrix(const PhaseSpaceGrid& grid, double mass) {
    const auto n = grid.size();
    if (!std::isfinite(mass)) return RealMatrix::Zero(n, n);
    // T_ij = (1/n) sum_m k_m^2/(2m) exp(i k_m (x_i - x_j)), m = -n/2 .. n/2-1
    RealVector t_of_offset(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        double s = 0.0;
        for (Eigen::Index m = -n / 2; m < n / 2; ++m) {
            const double k = 2.0 * std::numbers::pi * static_cast<double>(m) / grid.length();
            s += k * k * std::cos(2.0 * std::numbers::pi * static_cast<double>(m * r) / static_cast<double>(n));
        }
        t_of_offset[r] = s / (2.0 * mass * static_cast<double>(n));
    }
    RealMatrix t(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) t(i, j) = t_of_offset[((i - j) % n + n) % n];
    return t;
}

RealMatrix separation_squared(const PhaseSpaceGrid& grid, DistanceConvention convention) {
    const auto n = grid.size();
    RealMatrix d(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            double s = grid.x(i) - grid.x(j);
            if (convention == DistanceConvention::MinimumImage) s = grid.min_image(s);
            d(i, j) = s * s;
        }
    return d;
}

namespace {

struct Eq14Operator {
    ComplexMatrix kinetic;  // empty when the kinetic term is off
    RealMatrix decay;       // lambda (x - x')^2

    Eq14Operator(const LocalizationParams& params, const PhaseSpaceGrid& grid, bool with_kinetic) {
        params.validate();
        if (with_kinetic && std::isfinite(params.mass)) kinetic = kinetic_matrix(grid, params.mass).cast<Complex>();
        decay = params.lambda * separation_squared(grid, params.distance);
    }

    Eq14Operator(RealMatrix rates, const PhaseSpaceGrid& grid, double mass) : decay(std::move(rates)) {
        if (std::isfinite(mass)) kinetic = kinetic_matrix(grid, mass).cast<Complex>();
    }

    ComplexMatrix operator()(const ComplexMatrix& rho) const {
        ComplexMatrix out = -(decay.cast<Complex>().cwiseProduct(rho));
        if (kinetic.size() != 0) out.noalias() += -kI * (kinetic * rho - rho * kinetic);
        return out;
    }
};

}  // namespace

ComplexMatrix eq14_rhs(const LocalizationParams& params, const GridState& state, bool kinetic) {
    return Eq14Operator(params, state.grid(), kinetic)(state.rho());
}

double generator_rate_bound(const LocalizationParams& params, const PhaseSpaceGrid& grid, bool kinetic) {
    params.validate();
    double rate = params.lambda * separation_squared(grid, params.distance).maxCoeff();
    if (kinetic && std::isfinite(params.mass)) {
        const double kmax = std::numbers::pi / grid.dx();
        rate += kmax * kmax / (2.0 * params.mass);
    }
    return rate;
}

int min_stable_steps(const LocalizationParams& params, const PhaseSpaceGrid& grid, double t, bool kinetic,
                     double max_rate_dt) {
    if (!(max_rate_dt > 0.0) || max_rate_dt > 0.1) throw std::invalid_argument("min_stable_steps: max_rate_dt must be in (0, 0.1]");
    const double rate = generator_rate_bound(params, grid, kinetic);
    return std::max(1, static_cast<int>(std::floor(rate * t / max_rate_dt)) + 1);
}

namespace {

GridState run_rk4(const Eq14Operator& rhs, const GridState& state, double t, int steps, double rate,
                  const GridObserver& observer) {
    if (steps < 1) throw std::invalid_argument("evolve: steps must be >= 1");
    if (t < 0.0) throw std::invalid_argument("evolve: t must be >= 0");
    const double dt = t / steps;
    if (rate * dt >= 0.1) {
        std::ostringstream os;
        os << "evolve: stability guard violated (rate * dt = " << rate * dt << " >= 0.1); need at least "
           << std::max(1, static_cast<int>(std::floor(rate * t / 0.1)) + 1) << " steps";
        throw NumericalError(os.str());
    }
    ComplexMatrix rho = state.rho();
    if (observer) observer(0.0, rho);
    for (int s = 0; s < steps; ++s) {
        const ComplexMatrix k1 = rhs(rho);
        const ComplexMatrix k2 = rhs(rho + 0.5 * dt * k1);
        const ComplexMatrix k3 = rhs(rho + 0.5 * dt * k2);
        const ComplexMatrix k4 = rhs(rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = hermitian_part(rho);
        if (observer) observer((s + 1) * dt, rho);
    }
    return GridState(std::move(rho), state.grid());
}

}  // namespace

GridState evolve(const LocalizationParams& params, const GridState& state, double t, int steps,
                 bool kinetic, const GridObserver& observer) {
    return run_rk4(Eq14Operator(params, state.grid(), kinetic), state, t, steps,
                   generator_rate_bound(params, state.grid(), kinetic), observer);
}

GridState evolve_with_rates(const RealMatrix& rates, double mass, const GridState& state, double t, int steps,
                            const GridObserver& observer) {
    const auto& g = state.grid();
    if (rates.rows() != g.size() || rates.cols() != g.size())
        throw DimensionError("evolve_with_rates: rate matrix size differs from grid");
    if (rates.minCoeff() < 0.0) throw std::invalid_argument("evolve_with_rates: rates must be >= 0");
    if (!(mass > 0.0)) throw std::invalid_argument("evolve_with_rates: mass must be positive");
    double bound = rates.maxCoeff();
    if (std::isfinite(mass)) bound += std::pow(std::numbers::pi / g.dx(), 2) / (2.0 * mass);
    return run_rk4(Eq14Operator(rates, g, mass), state, t, steps, bound, observer);
}

GridState analytic_dephasing(const LocalizationParams& params, const GridState& state, double t) {
    params.validate();
    const RealMatrix d2 = separation_squared(state.grid(), params.distance);
    const ComplexMatrix factor = (-(params.lambda * t) * d2).array().exp().matrix().cast<Complex>();
    return GridState(state.rho().cwiseProduct(factor), state.grid());
}

LindbladModel grid_lindblad_model(const LocalizationParams& params, const PhaseSpaceGrid& grid, bool kinetic) {
    params.validate();
    const auto n = grid.size();
    ComplexMatrix h = ComplexMatrix::Zero(n, n);
    if (kinetic && std::isfinite(params.mass)) h = kinetic_matrix(grid, params.mass).cast<Complex>();
    ComplexMatrix x = grid.positions().cast<Complex>().asDiagonal();
    std::vector<ComplexMatrix> ls;
    if (params.lambda > 0.0) ls.push_back(std::sqrt(2.0 * params.lambda) * x);
    return LindbladModel(Observable(std::move(h)), std::move(ls));
}

double coherence_length(const GridState& state) {
    const auto& g = state.grid();
    const auto n = g.size();
    const double dx = g.dx();
    const ComplexMatrix& rho = state.rho();
    const double threshold = std::exp(-1.0);
    double weighted = 0.0;
    double total_weight = 0.0;
    for (Eigen::Index c = 0; c < n; ++c) {
        const double peak = std::abs(rho(c, c));
        const double weight = rho(c, c).real() * dx;
        if (weight < 1e-12 || peak <= 0.0) continue;
        double prev = 1.0;
        double s_e = -1.0;
        for (Eigen::Index m = 1; m < n / 2; ++m) {
            const Eigen::Index a = (c + (m + 1) / 2) % n;
            const Eigen::Index b = ((c - m / 2) % n + n) % n;
            const double v = std::abs(rho(a, b)) / peak;
            if (v < threshold) {
                const double frac = (prev - threshold) / (prev - v);
                s_e = (static_cast<double>(m - 1) + frac) * dx;
                break;
            }
            prev = v;
        }
        if (s_e < 0.0)
            throw NumericalError("coherence_length: coherence extends beyond half the grid; enlarge L");
        weighted += weight * 2.0 * s_e;
        total_weight += weight;
    }
    if (total_weight <= 0.0) throw NumericalError("coherence_length: state has no weight on the grid");
    const double width = weighted / total_weight;
    if (width < 4.0 * dx) {
        std::ostringstream os;
        os << "coherence_length: width " << width << " is below 4 dx = " << 4.0 * dx
           << "; state too narrow for the grid";
        throw NumericalError(os.str());
    }
    return width;
}

double dipole_radiation_probability(double alpha, int charge, double separation, double time, double c) {
    if (!(separation > 0.0) || !(time > 0.0) || !(c > 0.0))
        throw std::invalid_argument("dipole_radiation_probability: d, t, c must be positive");
    const double ratio = separation / (c * time);
    return alpha * static_cast<double>(charge) * static_cast<double>(charge) * ratio * ratio * ratio;
}

}  // namespace decohere
