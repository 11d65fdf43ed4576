#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flc {

/// Base class of every error raised by the toolkit.
///
/// Each error records the operation that failed and a short kind tag, so a
/// frontend can print a one-line diagnostic without parsing the message.
class Error : public std::runtime_error {
public:
    Error(std::string_view kind, std::string operation, const std::string& detail)
        : std::runtime_error(operation + ": " + detail),
          kind_(kind),
          operation_(std::move(operation)) {}

    [[nodiscard]] std::string_view kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string& operation() const noexcept { return operation_; }

private:
    std::string_view kind_;
    std::string operation_;
};

#define FLC_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                             \
    public:                                                                 \
        Name(std::string operation, const std::string& detail)              \
            : Error(#Name, std::move(operation), detail) {}                 \
    }

FLC_DEFINE_ERROR(PoleError);
FLC_DEFINE_ERROR(DomainError);
FLC_DEFINE_ERROR(TruncationError);
FLC_DEFINE_ERROR(EvaluationError);
FLC_DEFINE_ERROR(UnsupportedOrder);
FLC_DEFINE_ERROR(DegenerateDataError);
FLC_DEFINE_ERROR(NoWitnessError);
FLC_DEFINE_ERROR(OracleError);
FLC_DEFINE_ERROR(StabilityError);
FLC_DEFINE_ERROR(ConfigError);
FLC_DEFINE_ERROR(UnsupportedForm);
FLC_DEFINE_ERROR(UnboundVariable);
FLC_DEFINE_ERROR(IoError);

#undef FLC_DEFINE_ERROR

/// Malformed fractal expression. `offset` is the byte offset of the offending
/// token; `expected` lists what the grammar would have accepted there.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::string expected, const std::string& detail)
        : Error("ParseError", "parse",
                "at offset " + std::to_string(offset) + ": " + detail +
                    (expected.empty() ? std::string{} : " (expected " + expected + ")")),
          offset_(offset),
          expected_(std::move(expected)) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }
    [[nodiscard]] const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

}  // namespace flc
