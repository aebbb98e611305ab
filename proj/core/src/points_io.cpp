#include "disperse/points_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>
#include <vector>

namespace disperse {
namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double parse_field(std::string_view field, std::size_t line) {
  field = trim(field);
  if (field.empty()) throw ParseError(line, "empty coordinate");
  if (field.front() == '+') field.remove_prefix(1);
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line, "not a number: '" + std::string(field) + "'");
  }
  if (!(x >= 0.0 && x <= 1.0)) throw ParseError(line, "coordinate outside [0,1]: " + std::string(field));
  return x;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

PointSet read_points(std::istream& in, std::optional<std::size_t> dim) {
  std::vector<double> coords;
  std::optional<std::size_t> d = dim;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    std::size_t fields = 0;
    while (true) {
      auto comma = s.find(',');
      coords.push_back(parse_field(s.substr(0, comma), line));
      ++fields;
      if (comma == std::string_view::npos) break;
      s.remove_prefix(comma + 1);
    }
    if (!d) d = fields;
    if (fields != *d) {
      throw ParseError(line, "expected " + std::to_string(*d) + " coordinates, got " + std::to_string(fields));
    }
  }
  if (d && *d == 0) throw ParseError(line, "dimension must be >= 1");
  return PointSet(d.value_or(1), std::move(coords));
}

PointSet read_points(const std::filesystem::path& path, std::optional<std::size_t> dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_points(in, dim);
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_points(std::ostream& out, const PointSet& ps) {
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto p = ps[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (j) out << ',';
      out << format_double(p[j]);
    }
    out << '\n';
  }
}

void write_points(const std::filesystem::path& path, const PointSet& ps) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_points(out, ps);
}

}  // namespace disperse
