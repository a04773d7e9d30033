// errors.hpp — Exception types thrown by the library.
//
// Every failed precondition maps to one of these; the CLI converts any
// cpmod::Error into exit code 2 with the message on standard error.

#pragma once

#include <stdexcept>
#include <string>

namespace cpmod {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// numerics
struct NotHermitian : Error { using Error::Error; };
struct NotPSD : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// modspace
struct ModuleMismatch : Error { using Error::Error; };

// cpmaps
struct NotAModuleCPMap : Error { using Error::Error; };
struct NotCP : Error { using Error::Error; };
struct NotInCommutant : Error { using Error::Error; };

// dilation
struct NotMinimal : Error { using Error::Error; };

// compare
struct ShapeMismatch : Error { using Error::Error; };
struct NotEquivalent : Error { using Error::Error; };
struct NoCompatibleS : Error { using Error::Error; };
struct NotDominated : Error { using Error::Error; };
struct InvalidDerivative : Error { using Error::Error; };
struct ZeroMap : Error { using Error::Error; };

// io
struct ProblemFormat : Error { using Error::Error; };

} // namespace cpmod
