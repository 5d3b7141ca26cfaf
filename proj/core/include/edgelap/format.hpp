#pragma once

#include <complex>
#include <string>
#include <vector>

namespace edgelap {

// Fixed 17-significant-digit scientific notation ("%.16e"); byte-stable across runs.
std::string format_double(double v);

// Comma-separated table with a mandatory header row.
std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

// Parses "2", "-1.5e-3", "2+0.5i", "0-0.5i", "0.5i" (whitespace not allowed).
// Throws invalid_input on malformed text.
std::complex<double> parse_complex(const std::string& text);
double parse_real(const std::string& text);

std::string format_complex(std::complex<double> z);

}  // namespace edgelap
