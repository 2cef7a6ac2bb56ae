#pragma once

#include <stdexcept>
#include <string>

namespace qstat {

// Every library failure is one of the named conditions below. The category
// drives the process exit code: parse/usage conditions exit 2, numerical
// conditions exit 3.
enum class ErrorCategory { parse, numeric };

class Error : public std::runtime_error {
  public:
    Error(std::string kind, ErrorCategory cat, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)), cat_(cat) {}
    const std::string& kind() const { return kind_; }
    ErrorCategory category() const { return cat_; }

  private:
    std::string kind_;
    ErrorCategory cat_;
};

#define QSTAT_NUMERIC_ERROR(NAME)                                       \
    class NAME : public Error {                                         \
      public:                                                           \
        explicit NAME(const std::string& msg)                           \
            : Error(#NAME, ErrorCategory::numeric, msg) {}              \
    }

#define QSTAT_PARSE_ERROR(NAME)                                         \
    class NAME : public Error {                                         \
      public:                                                           \
        explicit NAME(const std::string& msg)                           \
            : Error(#NAME, ErrorCategory::parse, msg) {}                \
    }

QSTAT_NUMERIC_ERROR(InvalidDimension);
QSTAT_NUMERIC_ERROR(NotHermitian);
QSTAT_NUMERIC_ERROR(DimensionMismatch);
QSTAT_NUMERIC_ERROR(NotNormalized);
QSTAT_NUMERIC_ERROR(InvalidTemperature);
QSTAT_NUMERIC_ERROR(DegeneratePair);
QSTAT_NUMERIC_ERROR(UndefinedLevel);
QSTAT_NUMERIC_ERROR(DegenerateEnergies);
QSTAT_NUMERIC_ERROR(NoStationaryPoint);
QSTAT_NUMERIC_ERROR(EmptyGrid);
QSTAT_NUMERIC_ERROR(OrthogonalConditions);
QSTAT_NUMERIC_ERROR(VanishingOverlap);
QSTAT_NUMERIC_ERROR(NotPositive);
QSTAT_NUMERIC_ERROR(MissingEstimate);
QSTAT_NUMERIC_ERROR(EmptyPovm);
QSTAT_NUMERIC_ERROR(InvalidWindow);

QSTAT_PARSE_ERROR(InvalidSpec);
QSTAT_PARSE_ERROR(SyntaxError);
QSTAT_PARSE_ERROR(SchemaError);
QSTAT_PARSE_ERROR(UnknownOperation);
QSTAT_PARSE_ERROR(UnknownReference);
QSTAT_PARSE_ERROR(UnknownDemo);

#undef QSTAT_NUMERIC_ERROR
#undef QSTAT_PARSE_ERROR

}  // namespace qstat
