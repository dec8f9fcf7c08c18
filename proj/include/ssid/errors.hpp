#pragma once

#include <stdexcept>
#include <string>

namespace ssid {

enum class Errc {
    NotPrime,
    NotANonResidue,
    CharTooSmall,
    DivisionByZero,
    ZeroInput,
    RNotDividingGroupOrder,
    NotInSubgroup,
    SingularCurve,
    PointsOnDifferentCurves,
    PrimeTooLargeForOracle,
    BadLambda,
    ExcludedJInvariant,
    FileMissing,
    ParseError,
    InvariantViolation,
    FieldTooLarge,
    SameCharacteristic,
    SupersingularVertex,
    NoOrdinaryCurveWithJ,
    NotAnEdge,
    MissingNonResidue,
    NotDefinedOverPrimeField,
    BadInput,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace ssid
