#pragma once

#include <stdexcept>
#include <string>

namespace weylwalk {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid user input: unknown family, bad rank, malformed weight string, ...
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Requested family/rank outside the supported list (A_d, B_d, C_d, D_d, E6, E7).
class UnsupportedType : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// Fundamental weight index that is not minuscule for the given root system.
class NotMinuscule : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// Weight expected to lie in the span of the simple roots does not.
class NotInRootSpan : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// Weight expected to be dominant is not.
class NotDominant : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// Step distribution parameters out of range (theta must be in (0,1], etc).
class BadTheta : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// Base class for configurable resource caps; maps to a distinct CLI exit code.
class CapExceeded : public Error {
public:
    using Error::Error;
};

// Weyl orbit enumeration exceeded its cap.
class OrbitCapExceeded : public CapExceeded {
public:
    using CapExceeded::CapExceeded;
};

// Full Weyl group enumeration exceeded its cap.
class GroupCapExceeded : public CapExceeded {
public:
    using CapExceeded::CapExceeded;
};

// Dynamic-programming state space exceeded its cap.
class StateCapExceeded : public CapExceeded {
public:
    using CapExceeded::CapExceeded;
};

// Character evaluation point is (numerically) on a reflection wall and the
// requested evaluation mode cannot resolve the 0/0 form.
class SingularPoint : public Error {
public:
    using Error::Error;
};

// Doob transform requested with a harmonic function that is not strictly
// positive at a needed state.
class NonPositiveH : public Error {
public:
    using Error::Error;
};

// Least-squares fit asked for on a window with fewer than two points.
class DegenerateWindow : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

}  // namespace weylwalk
