#ifndef GREENLAB_MAP_IO_HPP
#define GREENLAB_MAP_IO_HPP

#include <string>

#include <json.hpp>

#include "greenlab/endomorphism.hpp"

namespace greenlab {

/// Map definition:
///   {k, d, label, components: [[{exponents: [e0..ek], re, im}, ...], ...],
///    solver?: "binary_form" | "diagonal_power" | {"sym2": <factor map>}}
/// Exponents must sum to d. Throws ConfigError on malformed input.
HomogeneousMap map_from_json(const nlohmann::json& j);
nlohmann::ordered_json map_to_json(const HomogeneousMap& f);

HomogeneousMap load_map(const std::string& path);
void save_map(const HomogeneousMap& f, const std::string& path);

}  // namespace greenlab

#endif  // GREENLAB_MAP_IO_HPP
