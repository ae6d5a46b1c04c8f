#include "circlenet/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace circlenet {

namespace {

constexpr double kTileTol = 1e-9;

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& why) {
  throw std::invalid_argument("parse error at line " +
                              std::to_string(line_no) + ": " + why);
}

// Content lines only (blank and '#' lines skipped), with 1-based numbers.
std::vector<std::pair<std::size_t, std::string>> content_lines(
    const std::string& text) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::istringstream in(text);
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.emplace_back(no, line);
  }
  return out;
}

std::vector<double> parse_numbers(const std::pair<std::size_t, std::string>& l,
                                  std::size_t expect) {
  std::vector<double> vals;
  const char* p = l.second.c_str();
  while (true) {
    char* end = nullptr;
    const double v = std::strtod(p, &end);
    if (end == p) break;
    if (!std::isfinite(v)) parse_fail(l.first, "non-finite value");
    vals.push_back(v);
    p = end;
  }
  // Anything left besides whitespace is junk.
  while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
  if (*p != '\0') parse_fail(l.first, "unexpected token '" + std::string(p) + "'");
  if (vals.size() != expect)
    parse_fail(l.first, "expected " + std::to_string(expect) +
                            " values, got " + std::to_string(vals.size()));
  return vals;
}

int parse_sign(double v, std::size_t line_no) {
  if (v == 1.0) return 1;
  if (v == -1.0) return -1;
  parse_fail(line_no, "sign must be +1 or -1");
}

std::size_t parse_count(double v, std::size_t line_no, const char* what) {
  if (v < 0 || v != std::floor(v) || v > 1e9)
    parse_fail(line_no, std::string("bad count for ") + what);
  return static_cast<std::size_t>(v);
}

}  // namespace

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_text(const PiecewiseTrig& f) {
  std::string out;
  for (const auto& p : f.pieces()) {
    out += format_full(p.arc.start) + ' ' + format_full(p.arc.width) + ' ' +
           format_full(p.c0) + ' ' + format_full(p.c1) + ' ' +
           format_full(p.c2) + '\n';
  }
  return out;
}

PiecewiseTrig piecewise_from_text(const std::string& text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw std::invalid_argument("empty piecewise input");
  std::vector<TrigPiece> pieces;
  for (const auto& l : lines) {
    const auto v = parse_numbers(l, 5);
    if (!(v[1] > 0) || v[1] > kTwoPi + kTileTol)
      parse_fail(l.first, "width outside (0, 2pi]");
    pieces.push_back(TrigPiece{Arc(wrap_angle(v[0]), std::min(v[1], kTwoPi)),
                               v[2], v[3], v[4]});
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const TrigPiece& a, const TrigPiece& b) {
              return a.arc.start < b.arc.start;
            });
  // Validate the tiling but keep the widths exactly as given, so canonical
  // output reloads bit-for-bit.
  const std::size_t n = pieces.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double next = (i + 1 < n) ? pieces[i + 1].arc.start
                                    : pieces[0].arc.start + kTwoPi;
    const double end = pieces[i].arc.start + pieces[i].arc.width;
    if (std::abs(end - next) > kTileTol)
      throw std::invalid_argument("pieces do not tile the circle");
  }
  PiecewiseTrig f(std::move(pieces), true);
  f.canonicalize();
  return f;
}

std::string to_text(const ReluNetwork& net) {
  std::string out = std::to_string(net.size()) + '\n';
  for (std::size_t i = 0; i < net.size(); ++i) {
    out += std::to_string(net.signs()[i]) + ' ' +
           format_full(net.weights()[i].x) + ' ' +
           format_full(net.weights()[i].y) + '\n';
  }
  return out;
}

ReluNetwork network_from_text(const std::string& text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw std::invalid_argument("empty network input");
  const auto header = parse_numbers(lines[0], 1);
  const std::size_t m = parse_count(header[0], lines[0].first, "m");
  if (m == 0) parse_fail(lines[0].first, "m must be positive");
  if (lines.size() != 1 + m)
    throw std::invalid_argument("expected " + std::to_string(m) +
                                " node lines, got " +
                                std::to_string(lines.size() - 1));
  std::vector<int> signs;
  std::vector<Vec2> weights;
  for (std::size_t i = 0; i < m; ++i) {
    const auto v = parse_numbers(lines[1 + i], 3);
    signs.push_back(parse_sign(v[0], lines[1 + i].first));
    weights.push_back(Vec2{v[1], v[2]});
  }
  return ReluNetwork(SignPattern(std::move(signs)), std::move(weights));
}

std::string to_text(const ClosureElement& elem) {
  std::string out = std::to_string(elem.m()) + ' ' +
                    std::to_string(elem.j_terms().size()) + ' ' +
                    std::to_string(elem.k_terms().size()) + '\n';
  for (std::size_t i = 0; i < elem.m(); ++i) {
    if (i) out += ' ';
    out += std::to_string(elem.signs()[i]);
  }
  out += '\n';
  for (const auto& t : elem.j_terms())
    out += format_full(t.w_hat.x) + ' ' + format_full(t.w_hat.y) + ' ' +
           format_full(t.v.x) + ' ' + format_full(t.v.y) + '\n';
  for (const auto& t : elem.k_terms())
    out += std::to_string(t.sign) + ' ' + format_full(t.w.x) + ' ' +
           format_full(t.w.y) + '\n';
  return out;
}

ClosureElement closure_from_text(const std::string& text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw std::invalid_argument("empty closure input");
  const auto header = parse_numbers(lines[0], 3);
  const std::size_t m = parse_count(header[0], lines[0].first, "m");
  const std::size_t nj = parse_count(header[1], lines[0].first, "nj");
  const std::size_t nk = parse_count(header[2], lines[0].first, "nk");
  if (m == 0) parse_fail(lines[0].first, "m must be positive");
  if (lines.size() != 2 + nj + nk)
    throw std::invalid_argument("expected " + std::to_string(1 + nj + nk) +
                                " body lines, got " +
                                std::to_string(lines.size() - 1));
  const auto sign_vals = parse_numbers(lines[1], m);
  std::vector<int> signs;
  for (double v : sign_vals) signs.push_back(parse_sign(v, lines[1].first));
  std::vector<JTerm> j_terms;
  for (std::size_t i = 0; i < nj; ++i) {
    const auto v = parse_numbers(lines[2 + i], 4);
    j_terms.push_back(JTerm{Vec2{v[0], v[1]}, Vec2{v[2], v[3]}});
  }
  std::vector<KTerm> k_terms;
  for (std::size_t i = 0; i < nk; ++i) {
    const auto& l = lines[2 + nj + i];
    const auto v = parse_numbers(l, 3);
    k_terms.push_back(KTerm{parse_sign(v[0], l.first), Vec2{v[1], v[2]}});
  }
  return ClosureElement(SignPattern(std::move(signs)), std::move(j_terms),
                        std::move(k_terms));
}

void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string load_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

PiecewiseTrig load_piecewise(const std::string& path) {
  return piecewise_from_text(load_text_file(path));
}
ReluNetwork load_network(const std::string& path) {
  return network_from_text(load_text_file(path));
}
ClosureElement load_closure(const std::string& path) {
  return closure_from_text(load_text_file(path));
}

}  // namespace circlenet
