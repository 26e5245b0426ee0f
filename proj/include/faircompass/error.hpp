#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace faircompass {

// Every failure the engine reports carries one of these codes. The service
// maps them onto HTTP status codes and the CLI onto exit code 2.
enum class ErrorCode {
    // ingestion / data model
    MissingColumn,
    RaggedRow,
    NonBinaryLabel,
    UnparseableNumeric,
    DuplicateColumn,
    UnknownFeature,
    NotNumeric,
    InvalidEdges,
    EmptyDataset,
    DatasetTooLarge,
    UnknownDataset,
    // subgroups
    UnknownValue,
    DuplicateFeature,
    ProductTooLarge,
    StaleSubgroup,
    UnknownSubgroup,
    UnknownGroupSet,
    EmptySet,
    // metrics
    UndefinedRate,
    TooFewGroups,
    OverlappingAttributes,
    NoQualifyingStrata,
    // suggestions
    KTooLarge,
    // decision tree
    MalformedTree,
    CycleDetected,
    DanglingAnswer,
    UnknownDefinition,
    MultipleRoots,
    UnreachableNode,
    UnknownNode,
    NotAQuestion,
    UnknownAnswer,
    OffPath,
    NoDefinitionSelected,
    MissingInput,
    // sessions
    UnknownSession,
    NoActiveSubgroups,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Ingestion failures point at the offending cell. Rows are 1-based data rows
// (the header is not counted).
class IngestError : public Error {
public:
    IngestError(ErrorCode code, const std::string& message, std::string column, size_t row = 0)
        : Error(code, message), column_(std::move(column)), row_(row) {}

    const std::string& column() const noexcept { return column_; }
    size_t row() const noexcept { return row_; }  // 0 when the error is not row-specific

private:
    std::string column_;
    size_t row_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace faircompass
