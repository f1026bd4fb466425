#pragma once

#include <iosfwd>
#include <string>

#include "qpg/conv.hpp"

namespace qpg {

// Structured text format mirroring the operator files: a spec descriptor and
// a term list {aux, x, w (with "inf" sentinel), re, im}.
void save_conv(const ConvElement& e, std::ostream& sink);
ConvElement load_conv(std::istream& source);

void save_conv_file(const ConvElement& e, const std::string& path);
ConvElement load_conv_file(const std::string& path);

} // namespace qpg
