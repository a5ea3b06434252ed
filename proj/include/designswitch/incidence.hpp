#ifndef DESIGNSWITCH_INCIDENCE_HPP
#define DESIGNSWITCH_INCIDENCE_HPP

#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bit_matrix.hpp"
#include "error.hpp"

namespace dsw {

using PointSet = std::vector<std::size_t>;

/// Finite incidence structure stored block-by-point: row i is block i, bit j
/// set iff point j lies on it. Repeated blocks are allowed.
class IncidenceStructure {
 public:
  IncidenceStructure() = default;

  explicit IncidenceStructure(BitMatrix m) : m_(std::move(m)) {}

  /// Builds from explicit blocks; rejects out-of-range or repeated points.
  IncidenceStructure(std::size_t v, const std::vector<PointSet>& blocks) : m_(blocks.size(), v) {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      for (std::size_t p : blocks[i]) {
        if (p >= v)
          throw design_error(errc::index_out_of_range,
                             "block " + std::to_string(i) + " has point " + std::to_string(p) + " >= v=" +
                                 std::to_string(v));
        if (m_.get(i, p))
          throw design_error(errc::invalid_argument,
                             "block " + std::to_string(i) + " repeats point " + std::to_string(p));
        m_.set(i, p);
      }
    }
  }

  std::size_t v() const noexcept { return m_.cols(); }
  std::size_t b() const noexcept { return m_.rows(); }

  bool incident(std::size_t block, std::size_t point) const noexcept { return m_.get(block, point); }
  std::size_t block_size(std::size_t block) const noexcept { return m_.row_count(block); }
  std::span<const word_t> block_bits(std::size_t block) const noexcept { return m_.row(block); }

  PointSet block(std::size_t i) const {
    PointSet out;
    for (std::size_t p = 0; p < v(); ++p)
      if (m_.get(i, p)) out.push_back(p);
    return out;
  }

  const BitMatrix& matrix() const noexcept { return m_; }
  BitMatrix& matrix() noexcept { return m_; }

  friend bool operator==(const IncidenceStructure&, const IncidenceStructure&) = default;

 private:
  BitMatrix m_;
};

/// Transpose: points become blocks and blocks become points.
inline IncidenceStructure dual(const IncidenceStructure& inc) { return IncidenceStructure(inc.matrix().transposed()); }

namespace detail {

// Next line that is neither blank nor a '#' comment. Leading/trailing
// whitespace is stripped.
inline bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    return true;
  }
  return false;
}

inline design_error parse_failure(std::size_t lineno, const std::string& what) {
  return design_error(errc::parse_error, "line " + std::to_string(lineno) + ": " + what);
}

inline bool is_switching_line(const std::string& line) { return line.rfind("S:", 0) == 0; }

}  // namespace detail

/// Reads one incidence fixture ("v b" header, then b rows of v '0'/'1'
/// characters). Returns false on clean end of input before a header.
/// "S:" switching-set lines are skipped.
inline bool read_incidence(std::istream& in, IncidenceStructure& out, std::size_t& lineno) {
  std::string line;
  do {
    if (!detail::next_content_line(in, line, lineno)) return false;
  } while (detail::is_switching_line(line));
  std::istringstream hs(line);
  long long v = -1, b = -1;
  std::string extra;
  if (!(hs >> v >> b) || (hs >> extra) || v < 0 || b < 0)
    throw detail::parse_failure(lineno, "expected header \"v b\", got \"" + line + "\"");
  BitMatrix m(static_cast<std::size_t>(b), static_cast<std::size_t>(v));
  for (long long i = 0; i < b; ++i) {
    do {
      if (!detail::next_content_line(in, line, lineno))
        throw detail::parse_failure(lineno, "expected " + std::to_string(b) + " rows, got " + std::to_string(i));
    } while (detail::is_switching_line(line));
    if (line.size() != static_cast<std::size_t>(v))
      throw detail::parse_failure(lineno, "row has " + std::to_string(line.size()) + " characters, expected " +
                                              std::to_string(v));
    for (long long j = 0; j < v; ++j) {
      const char c = line[static_cast<std::size_t>(j)];
      if (c == '1')
        m.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      else if (c != '0')
        throw detail::parse_failure(lineno, std::string("unexpected character '") + c + "'");
    }
  }
  out = IncidenceStructure(std::move(m));
  return true;
}

inline IncidenceStructure parse_incidence(std::istream& in) {
  std::size_t lineno = 0;
  IncidenceStructure inc;
  if (!read_incidence(in, inc, lineno)) throw design_error(errc::parse_error, "empty incidence fixture");
  return inc;
}

inline IncidenceStructure parse_incidence(const std::string& text) {
  std::istringstream in(text);
  return parse_incidence(in);
}

/// All designs of a concatenated stream, in order.
inline std::vector<IncidenceStructure> parse_incidence_stream(std::istream& in) {
  std::vector<IncidenceStructure> out;
  std::size_t lineno = 0;
  IncidenceStructure inc;
  while (read_incidence(in, inc, lineno)) out.push_back(std::move(inc));
  return out;
}

inline void write_incidence(std::ostream& out, const IncidenceStructure& inc) {
  out << inc.v() << ' ' << inc.b() << '\n';
  std::string row(inc.v(), '0');
  for (std::size_t i = 0; i < inc.b(); ++i) {
    for (std::size_t j = 0; j < inc.v(); ++j) row[j] = inc.incident(i, j) ? '1' : '0';
    out << row << '\n';
  }
}

inline std::string to_fixture(const IncidenceStructure& inc) {
  std::ostringstream out;
  write_incidence(out, inc);
  return out.str();
}

}  // namespace dsw

#endif
