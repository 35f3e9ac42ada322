#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace entrolab {

// Every failure carries a stable kind tag naming the violated invariant.
// The CLI prints the tag on stderr, so callers can match on it.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define ENTROLAB_ERROR(Name)                                             \
    struct Name final : Error {                                         \
        explicit Name(const std::string& m) : Error(#Name, m) {}        \
    }

ENTROLAB_ERROR(NotHermitian);
ENTROLAB_ERROR(ConvergenceFailure);
ENTROLAB_ERROR(DomainError);
ENTROLAB_ERROR(DimMismatch);
ENTROLAB_ERROR(NotPSD);
ENTROLAB_ERROR(TraceNotOne);
ENTROLAB_ERROR(NotResolutionOfIdentity);
ENTROLAB_ERROR(NotIsometry);
ENTROLAB_ERROR(InvalidShape);
ENTROLAB_ERROR(ZeroFirstArgument);
ENTROLAB_ERROR(OptimizerFailure);
ENTROLAB_ERROR(UnsupportedDimension);
ENTROLAB_ERROR(NotProjector);
ENTROLAB_ERROR(NotPure);
ENTROLAB_ERROR(NotProjectiveRankOne);
ENTROLAB_ERROR(ParseError);

#undef ENTROLAB_ERROR

}  // namespace entrolab
