// Plain-text formats for the core value types.
//
//   PiecewiseTrig  one line per piece: "start width c0 c1 c2"
//   ReluNetwork    header "m", then m lines "a_i w_x w_y"
//   ClosureElement header "m nj nk", a signs line, nj lines
//                  "what_x what_y v_x v_y", then nk lines "a w_x w_y"
//
// Every floating-point value is printed with 17 significant digits, so
// serialize -> parse -> serialize is byte-identical and parsed objects
// reproduce the originals bit for bit.
#pragma once

#include <string>

#include "circlenet/geometry.hpp"
#include "circlenet/network.hpp"

namespace circlenet {

// Shortest-exact decimal rendering: %.17g.
std::string format_full(double v);

std::string to_text(const PiecewiseTrig& f);
std::string to_text(const ReluNetwork& net);
std::string to_text(const ClosureElement& elem);

// Parsers throw std::invalid_argument with a line diagnostic on malformed
// input.  Blank lines and lines starting with '#' are ignored.
PiecewiseTrig piecewise_from_text(const std::string& text);
ReluNetwork network_from_text(const std::string& text);
ClosureElement closure_from_text(const std::string& text);

// File helpers; throw std::runtime_error when the path cannot be opened.
void save_text_file(const std::string& path, const std::string& text);
std::string load_text_file(const std::string& path);

PiecewiseTrig load_piecewise(const std::string& path);
ReluNetwork load_network(const std::string& path);
ClosureElement load_closure(const std::string& path);

}  // namespace circlenet
