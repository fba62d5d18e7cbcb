// error.cpp - names for error kinds
#include "qscatter/error.hpp"

namespace qs {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::NotLaurent: return "NotLaurent";
        case ErrorKind::PoleAtOne: return "PoleAtOne";
        case ErrorKind::NonVanishingDifference: return "NonVanishingDifference";
        case ErrorKind::ChartMismatch: return "ChartMismatch";
        case ErrorKind::OrderMismatch: return "OrderMismatch";
        case ErrorKind::MalformedWall: return "MalformedWall";
        case ErrorKind::SupportViolation: return "SupportViolation";
        case ErrorKind::NonIntegralExponent: return "NonIntegralExponent";
        case ErrorKind::UngradedInput: return "UngradedInput";
        case ErrorKind::NonPrimitive: return "NonPrimitive";
        case ErrorKind::Degenerate: return "Degenerate";
        case ErrorKind::NonGenerating: return "NonGenerating";
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::Parse: return "ParseError";
        case ErrorKind::Internal: return "InternalError";
    }
    return "Error";
}

}  // namespace qs
