#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace emlp {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an operation would enumerate a cell space above the explicit cap.
class CapExceeded : public Error {
public:
    explicit CapExceeded(const std::string& what) : Error(what) {}
};

/// Largest cell space that may be materialized as an explicit cell set.
inline constexpr std::uint64_t kExplicitCap = std::uint64_t(1) << 22;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline std::string to_string(const Rational& q) { return q.str(); }

/// Exact rational from a double (doubles are dyadic rationals).
inline Rational rational_from_double(double x) { return Rational(x); }

} // namespace emlp
