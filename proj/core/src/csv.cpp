#include "dtigra/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace dtigra::csv {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_signal(std::ostream& os, const Signal& s) {
  os << "t,value\n";
  const std::size_t n = s.grid_size();
  for (std::size_t i = 0; i < n; ++i) {
    os << format_double(Signal::grid_point(i, n)) << ',' << format_double(s[i]) << '\n';
  }
}

void write_coefficients(std::ostream& os, const CoefVec& x) {
  os << "index,value\n";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i + 1) << ',' << format_double(x[i]) << '\n';
}

void write_trace(std::ostream& os, const SolverTrace& trace) {
  os << "j,k,alpha,beta,phi,grad_norm,residual\n";
  for (const auto& r : trace.records) {
    os << r.j << ',' << r.k << ',' << format_double(r.alpha) << ',' << format_double(r.beta)
       << ',' << format_double(r.phi) << ',' << format_double(r.grad_norm) << ','
       << format_double(r.residual) << '\n';
  }
}

namespace {

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

double parse_double(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad number '" + tok + "'");
  }
  return v;
}

// Reads a two-column file with the given header; returns the column pairs.
std::vector<std::pair<std::string, double>> read_pairs(std::istream& is, const char* header) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != header) {
    throw std::runtime_error(std::string("csv: expected header '") + header + "'");
  }
  std::vector<std::pair<std::string, double>> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected two columns");
    }
    rows.emplace_back(line.substr(0, comma), parse_double(line.substr(comma + 1), lineno));
  }
  if (rows.empty()) throw std::runtime_error("csv: no data rows");
  return rows;
}

}  // namespace

Signal read_signal(std::istream& is) {
  const auto rows = read_pairs(is, "t,value");
  std::vector<double> v;
  v.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double t = parse_double(rows[i].first, i + 2);
    if (std::fabs(t - Signal::grid_point(i, rows.size())) > 1e-12) {
      throw std::runtime_error("csv: sample " + std::to_string(i + 1) + " is off the midpoint grid");
    }
    v.push_back(rows[i].second);
  }
  return Signal(std::move(v));
}

CoefVec read_coefficients(std::istream& is) {
  const auto rows = read_pairs(is, "index,value");
  std::vector<double> v;
  v.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != std::to_string(i + 1)) {
      throw std::runtime_error("csv: expected index " + std::to_string(i + 1) + ", got '" +
                               rows[i].first + "'");
    }
    v.push_back(rows[i].second);
  }
  return CoefVec(std::move(v));
}

}  // namespace dtigra::csv
