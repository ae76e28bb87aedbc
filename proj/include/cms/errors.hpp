#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cms/expr.hpp"

namespace cms {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string point_str(const Point3& p) {
    return "(" + ScalarField::format_double(p.x1) + ", " + ScalarField::format_double(p.x2) +
           ", " + ScalarField::format_double(p.x3) + ")";
}

// Family of failures caused by the evaluated data leaving its admissible set
// (singular matrices, vanishing denominators, excluded loci). The CLI maps
// these to exit code 3.
class NumericSingularityError : public Error {
public:
    NumericSingularityError(std::string message, Point3 witness)
        : Error(std::move(message)), witness_(witness) {}
    const Point3& witness() const { return witness_; }

private:
    Point3 witness_;
};

class ZeroOnDomainError : public NumericSingularityError {
public:
    ZeroOnDomainError(const std::string& field, Point3 witness)
        : NumericSingularityError("field '" + field + "' vanishes at grid point " +
                                      point_str(witness),
                                  witness),
          field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class SingularMatrixError : public NumericSingularityError {
public:
    SingularMatrixError(Point3 witness, double det)
        : NumericSingularityError(
              "matrix is singular at " + point_str(witness) + " (det = " +
                  ScalarField::format_double(det) + ")",
              witness),
          det_(det) {}
    double det() const { return det_; }

private:
    double det_;
};

class VanishingDenominatorError : public NumericSingularityError {
public:
    VanishingDenominatorError(Point3 witness, double value)
        : NumericSingularityError("denominator vanishes at " + point_str(witness) +
                                      " (value = " + ScalarField::format_double(value) + ")",
                                  witness),
          value_(value) {}
    double value() const { return value_; }

private:
    double value_;
};

class QuadratureDomainError : public NumericSingularityError {
public:
    using NumericSingularityError::NumericSingularityError;
};

class NotPositiveDefiniteError : public NumericSingularityError {
public:
    NotPositiveDefiniteError(Point3 witness, int minor_order, double minor_value)
        : NumericSingularityError(
              "matrix is not positive definite at " + point_str(witness) + ": leading " +
                  std::to_string(minor_order) + "x" + std::to_string(minor_order) +
                  " minor = " + ScalarField::format_double(minor_value),
              witness),
          minor_order_(minor_order),
          minor_value_(minor_value) {}
    int minor_order() const { return minor_order_; }
    double minor_value() const { return minor_value_; }

private:
    int minor_order_;
    double minor_value_;
};

class FrameDegenerateError : public NumericSingularityError {
public:
    using NumericSingularityError::NumericSingularityError;
};

// Structural problems in the supplied generator fields.
class FieldConstraintError : public Error {
public:
    using Error::Error;
};

// A deformation hypothesis failed; carries which of (1), (2), (3) failed and
// a witness point for each.
class HypothesisViolatedError : public Error {
public:
    HypothesisViolatedError(std::vector<int> violated, std::vector<Point3> witnesses,
                            std::string message)
        : Error(std::move(message)), violated_(std::move(violated)),
          witnesses_(std::move(witnesses)) {}
    const std::vector<int>& violated() const { return violated_; }
    const std::vector<Point3>& witnesses() const { return witnesses_; }

private:
    std::vector<int> violated_;
    std::vector<Point3> witnesses_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace cms
