#pragma once

#include <stdexcept>
#include <string>

namespace matchshift {

// Base class for everything this library throws on bad input.
struct Error : std::runtime_error {
    explicit Error(const std::string & what) : std::runtime_error(what) {}
};

struct DuplicateEntry : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct ZeroCapacity : Error { using Error::Error; };
struct InvalidPair : Error { using Error::Error; };
struct TiesUnsupported : Error { using Error::Error; };
struct ZeroDenominator : Error { using Error::Error; };
struct WrongChangeType : Error { using Error::Error; };
struct OracleTooLarge : Error { using Error::Error; };
struct InstanceTooLarge : Error { using Error::Error; };
struct BudgetTooLarge : Error { using Error::Error; };
struct TooManyTypes : Error { using Error::Error; };
struct FractionOutOfRange : Error { using Error::Error; };
struct DistanceOutOfRange : Error { using Error::Error; };
struct ScriptMismatch : Error { using Error::Error; };
struct DegenerateInput : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

} // namespace matchshift
