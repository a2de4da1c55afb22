#include "irs/rational.hpp"

#include <charconv>
#include <stdexcept>

namespace irs {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(std::string_view text) {
  long long num = 0, den = 1;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), num);
  if (ec != std::errc{})
    throw std::invalid_argument("parse_rational: bad numerator in \"" + std::string(text) + "\"");
  std::size_t pos = static_cast<std::size_t>(p - text.data());
  if (pos < text.size()) {
    if (text[pos] != '/')
      throw std::invalid_argument("parse_rational: expected '/' in \"" + std::string(text) + "\"");
    ++pos;
    auto [p2, ec2] = std::from_chars(text.data() + pos, text.data() + text.size(), den);
    if (ec2 != std::errc{} || p2 != text.data() + text.size() || den <= 0)
      throw std::invalid_argument("parse_rational: bad denominator in \"" + std::string(text) + "\"");
  }
  return Rational(num, den);
}

}  // namespace irs
