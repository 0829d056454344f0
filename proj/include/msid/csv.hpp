#pragma once

#include <iosfwd>
#include <string>

#include "msid/var.hpp"

namespace msid {

// Comma separated, '.' decimal point, one header row of channel labels,
// one row per sample. Throws Ingestion on ragged rows or non-numeric cells.
TimeSeries read_series_csv(std::istream& in);
TimeSeries read_series_csv(const std::string& path);

void write_series_csv(const TimeSeries& series, std::ostream& out);

// 12 significant digits, the precision of every emitted CSV number.
std::string format_number(double value);

/// Model file: a JSON object
///   {"M": 4, "p": 2, "coeffs": [[...M*M row-major...], ...], "sigma": [...M*M...]}
VarParams read_model(std::istream& in);
VarParams read_model(const std::string& path);
void write_model(const VarParams& params, std::ostream& out);

}  // namespace msid
