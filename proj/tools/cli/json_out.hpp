#pragma once

#include <string>

#include "json.hpp"

namespace edgelap::cli {

using ojson = nlohmann::ordered_json;

// Like dump(2) but floats are written as "%.16e" so output is byte-stable.
std::string dump_fixed(const ojson& j);

}  // namespace edgelap::cli
