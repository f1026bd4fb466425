#pragma once

#include <iosfwd>
#include <string>

#include "qpg/laurent.hpp"

namespace qpg {

// Structured text format: header (format_version, torus_rank, fock_dims)
// followed by per-exponent entry lists with multi-index rows/columns and
// shortest round-trip decimal coefficients.
void save(const LaurentOperator& op, std::ostream& sink);
LaurentOperator load(std::istream& source);

void save_file(const LaurentOperator& op, const std::string& path);
LaurentOperator load_file(const std::string& path);

} // namespace qpg
