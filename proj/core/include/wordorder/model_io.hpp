#pragma once

#include <iosfwd>
#include <string>

#include "wordorder/distributions.hpp"

namespace wordorder {

/// JSON model document:
///   {"roles": [...], "alphabets": [[...], ...], "entries": [{"tuple": [...], "p": x}, ...]}
/// Writing a model read from a file written by write_model reproduces the
/// same bytes. Throws io.InputParseError on malformed documents; domain
/// errors from model construction pass through.
JointModel parse_model(const std::string& text);
JointModel read_model(std::istream& in);
JointModel read_model_file(const std::string& path);

std::string write_model(const JointModel& model);

}  // namespace wordorder
