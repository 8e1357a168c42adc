#include "lipfree/rational.hpp"

#include <stdexcept>
#include <string>

namespace lipfree {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto first = s.find_first_not_of(" \t");
  auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos) throw std::invalid_argument("empty rational literal");
  s = s.substr(first, last - first + 1);
  Rational out;
  if (out.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational '" + s + "'");
  if (s.find('/') != std::string::npos && out.get_den() == 0) {
    throw std::invalid_argument("zero denominator in '" + s + "'");
  }
  out.canonicalize();
  return out;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

}  // namespace lipfree
