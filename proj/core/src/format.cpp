#include "edgelap/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "edgelap/error.hpp"

namespace edgelap {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += format_double(r[i]);
    }
    out += '\n';
  }
  return out;
}

double parse_real(const std::string& text) {
  if (text.empty()) fail(ErrorKind::invalid_input, "empty number");
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !std::isfinite(v))
    fail(ErrorKind::invalid_input, "not a finite number: '" + text + "'");
  return v;
}

std::complex<double> parse_complex(const std::string& text) {
  if (text.empty()) fail(ErrorKind::invalid_input, "empty complex number");
  if (text.back() != 'i') return {parse_real(text), 0.0};
  const std::string body = text.substr(0, text.size() - 1);
  // split at the last sign that is not part of an exponent and not leading
  std::size_t cut = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      cut = i;
      break;
    }
  }
  auto imag_of = [&](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_real(s);
  };
  if (cut == std::string::npos) return {0.0, imag_of(body)};
  return {parse_real(body.substr(0, cut)), imag_of(body.substr(cut))};
}

std::string format_complex(std::complex<double> z) {
  return format_double(z.real()) + (z.imag() < 0 ? "" : "+") + format_double(z.imag()) + "i";
}

}  // namespace edgelap
