#include "cli/json_out.hpp"

#include <cmath>

#include "edgelap/format.hpp"

namespace edgelap::cli {

namespace {

void write(const ojson& j, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + ojson(it.key()).dump() + ": ";
        write(it.value(), depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        write(v, depth + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case ojson::value_t::number_float: {
      const double v = j.get<double>();
      // JSON has no inf/nan literals
      if (std::isfinite(v)) out += format_double(v);
      else out += ojson(format_double(v)).dump();
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_fixed(const ojson& j) {
  std::string out;
  write(j, 0, out);
  out += "\n";
  return out;
}

}  // namespace edgelap::cli
