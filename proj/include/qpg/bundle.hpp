#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qpg/laurent.hpp"

namespace qpg {

// Named operator bundle: a directory with manifest.json listing {name, file}
// pairs, one operator file per entry.
void save_bundle(const std::string& dir,
                 const std::vector<std::pair<std::string, LaurentOperator>>& entries);

std::vector<std::pair<std::string, LaurentOperator>> load_bundle(const std::string& dir);

} // namespace qpg
