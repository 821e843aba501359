#pragma once

#include <json.hpp>

#include <string>

namespace tzitzeica::cli {

using Json = nlohmann::json;

/// Key-sorted JSON with every float written as %.17g (non-finite as null).
std::string dump_json(const Json& j);

/// One `dotted.path = value` line per leaf, key-sorted, same float format.
std::string dump_text(const Json& j);

std::string format_double(double v);

} // namespace tzitzeica::cli
