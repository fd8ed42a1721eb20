#pragma once

#include <string>

#include "singlet/bell.hpp"

namespace singlet {

// BellReport as a JSON object with keys g, filter, delta_th, beta_opt, V, A,
// B, per_sector, tail_mass. Doubles round-trip exactly.
std::string report_to_json(const BellReport& report);
BellReport report_from_json(const std::string& text);

}  // namespace singlet
