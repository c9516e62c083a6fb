#pragma once

#include <stdexcept>
#include <string>

namespace oamlink {

// Broad failure classes, mapped to CLI exit codes by the front end.
enum class ErrorCategory {
    Usage,       // bad command line
    Config,      // scenario parse / validation failures
    Domain,      // physics or numerics violated a precondition
    Io,          // filesystem problems
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, std::string msg)
        : std::runtime_error(std::move(msg)), cat_(cat) {}
    ErrorCategory category() const noexcept { return cat_; }

private:
    ErrorCategory cat_;
};

#define OAMLINK_DEFINE_ERROR(NAME, CATEGORY)                    \
    class NAME : public Error {                                 \
    public:                                                     \
        explicit NAME(std::string msg)                          \
            : Error(ErrorCategory::CATEGORY,                    \
                    std::string(#NAME ": ") + std::move(msg)) {} \
    }

// beam
OAMLINK_DEFINE_ERROR(InvalidBeamSpec, Domain);
OAMLINK_DEFINE_ERROR(EvanescentMode, Domain);
OAMLINK_DEFINE_ERROR(NonPhysicalRadius, Domain);
OAMLINK_DEFINE_ERROR(InvalidDistance, Domain);
OAMLINK_DEFINE_ERROR(TruncationTooSmall, Domain);
OAMLINK_DEFINE_ERROR(NoMainLobe, Domain);
OAMLINK_DEFINE_ERROR(InsufficientSamples, Domain);

// geometry
OAMLINK_DEFINE_ERROR(InvalidGeometry, Domain);
OAMLINK_DEFINE_ERROR(IndexOutOfRange, Domain);
OAMLINK_DEFINE_ERROR(DegenerateDirection, Domain);

// channel
OAMLINK_DEFINE_ERROR(ZeroRow, Domain);

// link
OAMLINK_DEFINE_ERROR(MisalignedBits, Domain);
OAMLINK_DEFINE_ERROR(PayloadOverflow, Domain);
OAMLINK_DEFINE_ERROR(DimensionMismatch, Domain);
OAMLINK_DEFINE_ERROR(ZeroPilotEnergy, Domain);
OAMLINK_DEFINE_ERROR(SingularEstimate, Domain);
OAMLINK_DEFINE_ERROR(LengthMismatch, Domain);

// cli
OAMLINK_DEFINE_ERROR(ParseError, Config);
OAMLINK_DEFINE_ERROR(ValidationError, Config);
OAMLINK_DEFINE_ERROR(IoError, Io);

#undef OAMLINK_DEFINE_ERROR

}  // namespace oamlink
