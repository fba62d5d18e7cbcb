// error.hpp - error kinds shared by all modules
#pragma once

#include <stdexcept>
#include <string>

namespace qs {

enum class ErrorKind {
    DivisionByZero,
    NotLaurent,
    PoleAtOne,
    NonVanishingDifference,
    ChartMismatch,
    OrderMismatch,
    MalformedWall,
    SupportViolation,
    NonIntegralExponent,
    UngradedInput,
    NonPrimitive,
    Degenerate,
    NonGenerating,
    InvalidInput,
    Parse,
    Internal,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace qs
