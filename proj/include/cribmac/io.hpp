#ifndef CRIBMAC_IO_HPP
#define CRIBMAC_IO_HPP

#include <string>

#include <json.hpp>

#include "cribmac/mac.hpp"

namespace cribmac {

// Channel schema: {"x1_size":..,"x2_size":..,"z_size":..,"w":[[..]]} with
// rows flattened x1-major (row = x1 * x2_size + x2) and probabilities as
// decimal numbers. Wiretap channels carry "y_size" and "wyz" with each row
// flattened y-major (entry = y * z_size + z). Loaders validate the usual
// invariants and reject on violation.
MacChannel mac_channel_from_json(const nlohmann::json& j);
WiretapMac wiretap_mac_from_json(const nlohmann::json& j);
bool is_wiretap_json(const nlohmann::json& j);

nlohmann::json to_json(const MacChannel& mac);
nlohmann::json to_json(const WiretapMac& wmac);

// Law schema: {"type":"joint","x1_size":..,"x2_size":..,"p":[[..]]} (p[x1][x2])
// or {"type":"with_aux","p_u":[..],"p_x1_given_u":[[..]],"p_x2_given_u":[[..]]}.
InputLaw law_from_json(const nlohmann::json& j);
nlohmann::json to_json(const InputLaw& law);

nlohmann::json load_json_file(const std::string& path);

}  // namespace cribmac

#endif  // CRIBMAC_IO_HPP
