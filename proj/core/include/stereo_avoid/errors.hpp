#pragma once

#include <stdexcept>

namespace stereo_avoid {

/// Disparity that cannot be converted to a finite depth (zero or negative).
class InvalidDisparityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Non-positive depth handed to an operation that needs a physical distance.
class InvalidDepthError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Output distribution with no nonzero sample; defuzzification is undefined.
class NoActivationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed file or config content.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace stereo_avoid
