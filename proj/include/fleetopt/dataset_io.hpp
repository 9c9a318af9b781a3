#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fleetopt/dataset.hpp"

namespace fleetopt {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Reads an instance file. The grammar is documented in docs/instance-format.md.
Dataset parse_dataset(std::string_view text);

/// Canonical text; parse_dataset(serialize_dataset(d)) == d.
std::string serialize_dataset(const Dataset& d);

/// 16 hex digits of FNV-1a over the canonical serialization.
std::string instance_digest(const Dataset& d);

}  // namespace fleetopt
