#ifndef SMOOTHKIT_ERROR_HPP
#define SMOOTHKIT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace smoothkit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the admissible range of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A function evaluator returned a non-finite value.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& label, double x);
    double where() const noexcept { return x_; }

private:
    double x_;
};

/// Adaptive quadrature failed to reach its tolerance.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double achieved_estimate, double last_difference);
    double estimate() const noexcept { return estimate_; }
    double last_difference() const noexcept { return difference_; }

private:
    double estimate_;
    double difference_;
};

/// An iterative solver ran out of iterations.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double lower, double upper, int iterations);
    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    int iterations() const noexcept { return iterations_; }

private:
    double lower_;
    double upper_;
    int iterations_;
};

/// Collocation system of a spline operator is singular.
class SingularSystemError : public Error {
public:
    using Error::Error;
};

} // namespace smoothkit

#endif // SMOOTHKIT_ERROR_HPP
