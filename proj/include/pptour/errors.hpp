#pragma once

#include <stdexcept>
#include <string>

namespace pptour {

// Error taxonomy. The CLI maps these onto exit codes:
//   config errors -> 2, data errors -> 3, evaluation errors -> 4.

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeError : DataError {
    using DataError::DataError;
};

struct DegenerateColumn : DataError {
    using DataError::DataError;
};

struct DegeneratePlane : DataError {
    using DataError::DataError;
};

struct DegenerateSpread : DataError {
    using DataError::DataError;
};

struct CollinearInput : DataError {
    using DataError::DataError;
};

struct TooFewPoints : DataError {
    using DataError::DataError;
};

struct InvalidParameter : ConfigError {
    using ConfigError::ConfigError;
};

struct UnknownIndex : ConfigError {
    using ConfigError::ConfigError;
};

struct CalibrationRequired : EvaluationError {
    using EvaluationError::EvaluationError;
};

struct IndexEvaluationError : EvaluationError {
    using EvaluationError::EvaluationError;
};

struct NoStructureAtTarget : EvaluationError {
    using EvaluationError::EvaluationError;
};

struct EmptyTrace : DataError {
    using DataError::DataError;
};

} // namespace pptour
