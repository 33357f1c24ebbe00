#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace physio {

// Every failure mode in the library maps to one of these codes so callers
// (and tests) can match on the condition instead of parsing messages.
enum class ErrorCode {
    // ingest
    MissingColumn,
    MalformedRow,
    NonMonotonicTime,
    NonUniformSampling,
    NonFiniteSample,
    UnknownLabel,
    OnsetOutOfRange,
    MixedLayout,
    // dsp
    CutoffAboveNyquist,
    OddOrder,
    InvalidBand,
    SignalTooShort,
    UnsupportedRate,
    // epoch
    WindowExceedsRecording,
    InsufficientPreOnsetData,
    // features / fusion
    MissingModality,
    EmptyEnsemble,
    // models
    EmptyMatrix,
    ClassAbsent,
    SingleClass,
    NonPositiveC,
    DegenerateLabels,
    BadModelFile,
    // eval
    ClassTooSmall,
    ClassSmallerThanK,
    EmptyGrid,
    EmptyVector,
    // synth
    InvalidDuration,
    RateTooLow,
    // cli
    ConfigError,
    IoError,
    PipelineError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::size_t line = 0)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message +
                             (line ? " (line " + std::to_string(line) + ")" : "")),
          code_(code),
          line_(line) {}

    ErrorCode code() const { return code_; }
    // 1-based input line for parse errors, 0 when not applicable.
    std::size_t line() const { return line_; }

private:
    ErrorCode code_;
    std::size_t line_;
};

}  // namespace physio
