#include "faircompass/error.hpp"

namespace faircompass {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::RaggedRow: return "RaggedRow";
        case ErrorCode::NonBinaryLabel: return "NonBinaryLabel";
        case ErrorCode::UnparseableNumeric: return "UnparseableNumeric";
        case ErrorCode::DuplicateColumn: return "DuplicateColumn";
        case ErrorCode::UnknownFeature: return "UnknownFeature";
        case ErrorCode::NotNumeric: return "NotNumeric";
        case ErrorCode::InvalidEdges: return "InvalidEdges";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::DatasetTooLarge: return "DatasetTooLarge";
        case ErrorCode::UnknownDataset: return "UnknownDataset";
        case ErrorCode::UnknownValue: return "UnknownValue";
        case ErrorCode::DuplicateFeature: return "DuplicateFeature";
        case ErrorCode::ProductTooLarge: return "ProductTooLarge";
        case ErrorCode::StaleSubgroup: return "StaleSubgroup";
        case ErrorCode::UnknownSubgroup: return "UnknownSubgroup";
        case ErrorCode::UnknownGroupSet: return "UnknownGroupSet";
        case ErrorCode::EmptySet: return "EmptySet";
        case ErrorCode::UndefinedRate: return "UndefinedRate";
        case ErrorCode::TooFewGroups: return "TooFewGroups";
        case ErrorCode::OverlappingAttributes: return "OverlappingAttributes";
        case ErrorCode::NoQualifyingStrata: return "NoQualifyingStrata";
        case ErrorCode::KTooLarge: return "KTooLarge";
        case ErrorCode::MalformedTree: return "MalformedTree";
        case ErrorCode::CycleDetected: return "CycleDetected";
        case ErrorCode::DanglingAnswer: return "DanglingAnswer";
        case ErrorCode::UnknownDefinition: return "UnknownDefinition";
        case ErrorCode::MultipleRoots: return "MultipleRoots";
        case ErrorCode::UnreachableNode: return "UnreachableNode";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::NotAQuestion: return "NotAQuestion";
        case ErrorCode::UnknownAnswer: return "UnknownAnswer";
        case ErrorCode::OffPath: return "OffPath";
        case ErrorCode::NoDefinitionSelected: return "NoDefinitionSelected";
        case ErrorCode::MissingInput: return "MissingInput";
        case ErrorCode::UnknownSession: return "UnknownSession";
        case ErrorCode::NoActiveSubgroups: return "NoActiveSubgroups";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace faircompass
