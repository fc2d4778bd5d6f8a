#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace bnaccel {

/// Exact rational scalar used by the exact-mode table generators and
/// cross-checks. Values are kept in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Formats as "p" or "p/q".
inline std::string to_string(const Rational& q)
{
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses "p", "p/q", or a plain integer-valued decimal such as "4".
inline Rational parse_rational(const std::string& text)
{
    try {
        const auto slash = text.find('/');
        if (slash == std::string::npos) return Rational(BigInt(text));
        const BigInt num(text.substr(0, slash));
        const BigInt den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational: '" + text + "'");
    }
}

}  // namespace bnaccel
