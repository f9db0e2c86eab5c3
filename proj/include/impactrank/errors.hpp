#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace impactrank {

// Base for all library errors. `kind()` is the stable error name used in
// CLI messages and sweep error columns.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define IMPACTRANK_DEFINE_ERROR(NAME)                                    \
    struct NAME : Error {                                                \
        explicit NAME(const std::string& msg) : Error(#NAME, msg) {}     \
    }

IMPACTRANK_DEFINE_ERROR(MissingMetadata);
IMPACTRANK_DEFINE_ERROR(MalformedRecord);
IMPACTRANK_DEFINE_ERROR(RatioOutOfRange);
IMPACTRANK_DEFINE_ERROR(EmptyGraph);
IMPACTRANK_DEFINE_ERROR(DimensionMismatch);
IMPACTRANK_DEFINE_ERROR(SingularSystem);
IMPACTRANK_DEFINE_ERROR(ContractionPreconditionViolated);
IMPACTRANK_DEFINE_ERROR(EmptyWindow);
IMPACTRANK_DEFINE_ERROR(InsufficientTail);
IMPACTRANK_DEFINE_ERROR(DegenerateInput);
IMPACTRANK_DEFINE_ERROR(ZeroIdeal);
IMPACTRANK_DEFINE_ERROR(MissingAuthors);
IMPACTRANK_DEFINE_ERROR(InvalidParams);

#undef IMPACTRANK_DEFINE_ERROR

// Iterative solver ran out of iterations; carries the last residual and
// the partial residual trace so callers can report how the run behaved.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& msg, double residual, int iterations,
                  std::vector<double> trace = {})
        : Error("NoConvergence", msg),
          residual_(residual),
          iterations_(iterations),
          trace_(std::move(trace)) {}
    double residual() const { return residual_; }
    int iterations() const { return iterations_; }
    const std::vector<double>& trace() const { return trace_; }

private:
    double residual_;
    int iterations_;
    std::vector<double> trace_;
};

}  // namespace impactrank
