#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace pnrp2 {

// Exact integer used for all exponents, matrix entries and certificate data.
using Int = boost::multiprecision::cpp_int;

inline Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

inline Int gcd_int(Int a, Int b) {
    a = abs_int(a);
    b = abs_int(b);
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Base class for everything this library throws.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed textual input (word grammar, presentation files). Carries the
// byte offset of the first offending character.
struct parse_error : error {
    std::size_t pos;
    parse_error(const std::string& msg, std::size_t at)
        : error(msg + " (at offset " + std::to_string(at) + ")"), pos(at) {}
};

// Structurally valid input that violates an index range or a precondition.
struct domain_error : error {
    using error::error;
};

// Converts an Int known to be small to a plain long; used where an
// algorithm genuinely has to expand an exponent letter by letter.
inline long to_long_checked(const Int& x, const char* what) {
    if (x > Int(std::numeric_limits<long>::max()) ||
        x < Int(std::numeric_limits<long>::min()))
        throw domain_error(std::string(what) + ": exponent too large to expand");
    return static_cast<long>(x);
}

} // namespace pnrp2
