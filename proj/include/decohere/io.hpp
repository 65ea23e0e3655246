#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "decohere/dynamics.hpp"
#include "decohere/grid.hpp"
#include "decohere/hilbert.hpp"

namespace decohere {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

/// Complex matrices as {"rows", "cols", "data": [[re, im], ...]} in row-major order.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

/// {"dim", "provenance", "data"}; reading re-validates the invariants.
json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const json& j);

/// {"dim", "H": matrix, "Ls": [matrix, ...]}
json lindblad_to_json(const LindbladModel& model);
LindbladModel lindblad_from_json(const json& j);

/// {"n_x", "L", "rho": [[re, im], ...]} row-major.
json grid_state_to_json(const GridState& state);
GridState grid_state_from_json(const json& j);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// Writes to a sibling temporary file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace decohere
