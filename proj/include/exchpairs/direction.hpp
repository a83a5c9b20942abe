#pragma once

#include <stdexcept>
#include <string>

namespace exchpairs {

enum class Direction { x_to_y, y_to_x };

inline const char* to_string(Direction d) {
  return d == Direction::x_to_y ? "XtoY" : "YtoX";
}

inline Direction direction_from_string(const std::string& s) {
  if (s == "XtoY") return Direction::x_to_y;
  if (s == "YtoX") return Direction::y_to_x;
  throw std::invalid_argument("unknown direction: " + s);
}

inline Direction flip(Direction d) {
  return d == Direction::x_to_y ? Direction::y_to_x : Direction::x_to_y;
}

}  // namespace exchpairs
