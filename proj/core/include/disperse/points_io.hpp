#pragma once

// Plain-text point files: one point per line, d comma-separated decimals.
// Blank lines and lines starting with '#' are ignored.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "disperse/geometry.hpp"

namespace disperse {

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// Dimension comes from the first data line unless `dim` is given. A file with
// no data lines yields an empty set of dimension `dim` (or 1).
PointSet read_points(std::istream& in, std::optional<std::size_t> dim = std::nullopt);
PointSet read_points(const std::filesystem::path& path, std::optional<std::size_t> dim = std::nullopt);

void write_points(std::ostream& out, const PointSet& ps);
void write_points(const std::filesystem::path& path, const PointSet& ps);

// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

}  // namespace disperse
