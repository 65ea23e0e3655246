#include "decohere/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace decohere {

json matrix_to_json(const ComplexMatrix& m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

namespace {

ComplexMatrix read_entries(const json& data, Eigen::Index rows, Eigen::Index cols) {
    if (!data.is_array() || data.size() != static_cast<std::size_t>(rows * cols))
        throw std::invalid_argument("matrix json: expected rows * cols [re, im] entries");
    ComplexMatrix m(rows, cols);
    for (Eigen::Index k = 0; k < rows * cols; ++k) {
        const auto& e = data[static_cast<std::size_t>(k)];
        if (!e.is_array() || e.size() != 2) throw std::invalid_argument("matrix json: entry is not [re, im]");
        m(k / cols, k % cols) = Complex(e[0].get<double>(), e[1].get<double>());
    }
    return m;
}

Provenance provenance_from(const std::string& s) {
    if (s == to_string(Provenance::FromEnsemble)) return Provenance::FromEnsemble;
    if (s == to_string(Provenance::Reduced)) return Provenance::Reduced;
    if (s == to_string(Provenance::Direct)) return Provenance::Direct;
    throw std::invalid_argument("density json: unknown provenance '" + s + "'");
}

}  // namespace

ComplexMatrix matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    return read_entries(j.at("data"), rows, cols);
}

json density_to_json(const DensityMatrix& rho) {
    json out = matrix_to_json(rho.matrix());
    return {{"dim", rho.dim()}, {"provenance", to_string(rho.provenance())}, {"data", out["data"]}};
}

DensityMatrix density_from_json(const json& j) {
    const auto dim = j.at("dim").get<Eigen::Index>();
    const auto prov = j.contains("provenance") ? provenance_from(j["provenance"].get<std::string>()) : Provenance::Direct;
    return DensityMatrix(read_entries(j.at("data"), dim, dim), prov);
}

json lindblad_to_json(const LindbladModel& model) {
    json ls = json::array();
    for (const auto& l : model.generators()) ls.push_back(matrix_to_json(l));
    return {{"dim", model.dim()}, {"H", matrix_to_json(model.hamiltonian().matrix())}, {"Ls", std::move(ls)}};
}

LindbladModel lindblad_from_json(const json& j) {
    const auto dim = j.at("dim").get<Eigen::Index>();
    ComplexMatrix h = matrix_from_json(j.at("H"));
    if (h.rows() != dim || h.cols() != dim) throw DimensionError("lindblad json: H has the wrong size");
    std::vector<ComplexMatrix> ls;
    for (const auto& l : j.value("Ls", json::array())) {
        ls.push_back(matrix_from_json(l));
        if (ls.back().rows() != dim || ls.back().cols() != dim)
            throw DimensionError("lindblad json: generator has the wrong size");
    }
    return LindbladModel(Observable(std::move(h)), std::move(ls));
}

json grid_state_to_json(const GridState& state) {
    json out = matrix_to_json(state.rho());
    return {{"n_x", state.grid().size()}, {"L", state.grid().length()}, {"rho", out["data"]}};
}

GridState grid_state_from_json(const json& j) {
    const PhaseSpaceGrid grid(j.at("n_x").get<Eigen::Index>(), j.at("L").get<double>());
    return GridState(read_entries(j.at("rho"), grid.size(), grid.size()), grid);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!os) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace decohere
