#include "msid/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "msid/error.hpp"

namespace msid {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (!cell.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw Error(ErrorCode::kIngestion,
                "line " + std::to_string(line_no) + ": non-numeric cell '" + cell + "'");
  }
  return value;
}

Mat matrix_from_json(const nlohmann::json& values, int m, const char* what) {
  if (!values.is_array() || values.size() != static_cast<std::size_t>(m * m)) {
    throw Error(ErrorCode::kIngestion,
                std::string(what) + " must list " + std::to_string(m * m) + " numbers");
  }
  Mat out(m, m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) out(r, c) = values.at(r * m + c).get<double>();
  }
  return out;
}

nlohmann::json matrix_to_json(const Mat& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  }
  return out;
}

}  // namespace

TimeSeries read_series_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  TimeSeries series;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw Error(ErrorCode::kIngestion, "missing header row");
  series.labels = split(line);
  const std::size_t m = series.labels.size();

  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != m) {
      throw Error(ErrorCode::kIngestion, "line " + std::to_string(line_no) + " has " +
                                             std::to_string(cells.size()) + " cells, expected " +
                                             std::to_string(m));
    }
    for (const auto& cell : cells) values.push_back(parse_cell(cell, line_no));
    ++rows;
  }
  if (rows == 0) throw Error(ErrorCode::kIngestion, "no data rows");
  series.values = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(m));
  return series;
}

TimeSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return read_series_csv(in);
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_series_csv(const TimeSeries& series, std::ostream& out) {
  for (std::size_t i = 0; i < series.labels.size(); ++i) {
    out << (i ? "," : "") << series.labels[i];
  }
  out << '\n';
  for (Eigen::Index r = 0; r < series.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < series.values.cols(); ++c) {
      out << (c ? "," : "") << format_number(series.values(r, c));
    }
    out << '\n';
  }
}

VarParams read_model(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
    const int m = doc.at("M").get<int>();
    const int p = doc.at("p").get<int>();
    if (m < 1 || p < 0) throw Error(ErrorCode::kIngestion, "model needs M >= 1 and p >= 0");
    const auto& coeffs = doc.at("coeffs");
    if (!coeffs.is_array() || coeffs.size() != static_cast<std::size_t>(p)) {
      throw Error(ErrorCode::kIngestion, "model lists " + std::to_string(coeffs.size()) +
                                             " coefficient matrices, expected p = " +
                                             std::to_string(p));
    }
    VarParams params;
    for (const auto& a : coeffs) params.coeffs.push_back(matrix_from_json(a, m, "coefficient matrix"));
    params.sigma = matrix_from_json(doc.at("sigma"), m, "sigma");
    validate(params);
    return params;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIngestion, std::string("malformed model file: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidArgument) throw Error(ErrorCode::kIngestion, e.what());
    throw;
  }
}

VarParams read_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return read_model(in);
}

void write_model(const VarParams& params, std::ostream& out) {
  nlohmann::json doc;
  doc["M"] = params.channels();
  doc["p"] = params.order();
  doc["coeffs"] = nlohmann::json::array();
  for (const Mat& a : params.coeffs) doc["coeffs"].push_back(matrix_to_json(a));
  doc["sigma"] = matrix_to_json(params.sigma);
  out << doc.dump(2) << '\n';
}

}  // namespace msid
