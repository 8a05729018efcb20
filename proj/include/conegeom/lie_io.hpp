#pragma once

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "conegeom/errors.hpp"
#include "conegeom/lie_algebra.hpp"

namespace conegeom {

// Text format:
//   dim n
//   <n labels>
//   i j k p/q        one line per nonzero c[i][j][k], 0-based indices
// Blank lines and '#' comments are ignored. A missing antisymmetric partner
// c[j][i][k] is filled in as -c[i][j][k].

struct ParsedTensor {
  StructureTensor tensor;
  std::vector<std::string> labels;
};

namespace detail {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t end = line.find('#');
  const std::size_t n = end == std::string::npos ? line.size() : end;
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= n) break;
    const std::size_t start = i;
    while (i < n && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

inline bool parse_integer(const std::string& s, BigInt& out) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
  out = BigInt(s[0] == '+' ? s.substr(1) : s);
  return true;
}

}  // namespace detail

inline bool parse_rational(const std::string& s, Rational& out) {
  const auto slash = s.find('/');
  BigInt num, den = 1;
  if (slash == std::string::npos) {
    if (!detail::parse_integer(s, num)) return false;
  } else {
    if (!detail::parse_integer(s.substr(0, slash), num)) return false;
    const std::string d = s.substr(slash + 1);
    if (d.empty() || d[0] == '-' || d[0] == '+' || !detail::parse_integer(d, den) || den == 0) return false;
  }
  out = Rational(num, den);
  return true;
}

inline ParsedTensor parse_tensor(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t n = 0;
  bool have_dim = false, have_labels = false;
  ParsedTensor result;
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> explicit_entries;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, Rational>> entries;

  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = detail::tokenize(line);
    if (toks.empty()) continue;
    if (!have_dim) {
      BigInt d;
      if (toks[0].text != "dim") throw ParseError(lineno, toks[0].column, "expected 'dim <n>'");
      if (toks.size() != 2) throw ParseError(lineno, toks[0].column, "expected exactly 'dim <n>'");
      if (!detail::parse_integer(toks[1].text, d) || d <= 0 || d > 64)
        throw ParseError(lineno, toks[1].column, "dimension must be an integer in 1..64");
      n = static_cast<std::size_t>(d);
      have_dim = true;
      continue;
    }
    if (!have_labels) {
      if (toks.size() != n)
        throw ParseError(lineno, toks.size() > n ? toks[n].column : line.size() + 1,
                         "expected " + std::to_string(n) + " labels");
      for (const auto& t : toks) result.labels.push_back(t.text);
      have_labels = true;
      continue;
    }
    if (toks.size() != 4) throw ParseError(lineno, toks[0].column, "expected 'i j k p/q'");
    std::size_t idx[3];
    for (int a = 0; a < 3; ++a) {
      BigInt v;
      if (!detail::parse_integer(toks[a].text, v) || v < 0 || v >= n)
        throw ParseError(lineno, toks[a].column, "index must be an integer in 0.." + std::to_string(n - 1));
      idx[a] = static_cast<std::size_t>(v);
    }
    Rational value;
    if (!parse_rational(toks[3].text, value)) throw ParseError(lineno, toks[3].column, "malformed rational");
    if (!explicit_entries.insert({idx[0], idx[1], idx[2]}).second)
      throw ParseError(lineno, toks[0].column, "duplicate entry");
    entries.emplace_back(idx[0], idx[1], idx[2], value);
  }
  if (!have_dim) throw ParseError(lineno + 1, 1, "missing 'dim' header");
  if (!have_labels) throw ParseError(lineno + 1, 1, "missing label line");

  result.tensor = StructureTensor(n);
  for (const auto& [i, j, k, v] : entries) {
    result.tensor(i, j, k) = v;
    if (i != j && !explicit_entries.count({j, i, k})) result.tensor(j, i, k) = -v;
  }
  return result;
}

inline LieAlgebra read_algebra(std::istream& in) {
  auto parsed = parse_tensor(in);
  return LieAlgebra::validate(std::move(parsed.tensor), std::move(parsed.labels));
}

inline LieAlgebra read_algebra_string(const std::string& text) {
  std::istringstream in(text);
  return read_algebra(in);
}

inline LieAlgebra read_algebra_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open algebra file: " + path);
  return read_algebra(in);
}

inline void write_algebra(std::ostream& out, const LieAlgebra& g) {
  const std::size_t n = g.dim();
  out << "dim " << n << "\n";
  for (std::size_t i = 0; i < n; ++i) out << (i ? " " : "") << g.labels()[i];
  out << "\n";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const auto& c = g.constants()(i, j, k);
        if (c != 0) out << i << " " << j << " " << k << " " << c.str() << "\n";
      }
}

inline std::string algebra_to_string(const LieAlgebra& g) {
  std::ostringstream out;
  write_algebra(out, g);
  return out.str();
}

}  // namespace conegeom
