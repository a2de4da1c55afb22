#ifndef IRS_RATIONAL_HPP
#define IRS_RATIONAL_HPP

#include <boost/rational.hpp>
#include <string>
#include <string_view>

namespace irs {

// Exact rational arithmetic for stage measures and density ratios.
// Numerators and denominators stay small (point counts, small powers of
// two), so 64 bits are enough.
using Rational = boost::rational<long long>;

std::string to_string(const Rational& r);

// Accepts "p" or "p/q"; q must be positive.
Rational parse_rational(std::string_view text);

}  // namespace irs

#endif
