#include "mgsg/error.hpp"

namespace mgsg {

const char* error_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::ZeroDegreeVertex: return "ZeroDegreeVertex";
    case ErrorCode::NonpositiveLength: return "NonpositiveLength";
    case ErrorCode::DanglingVertexReference: return "DanglingVertexReference";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::MissingEndpointDatum: return "MissingEndpointDatum";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::MissingVertex: return "MissingVertex";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DegreeTooSmall: return "DegreeTooSmall";
    case ErrorCode::SingularAtK: return "SingularAtK";
    case ErrorCode::PoleAtK: return "PoleAtK";
    case ErrorCode::NotLocal: return "NotLocal";
    case ErrorCode::NotLocalInput: return "NotLocalInput";
    case ErrorCode::NotContinuous: return "NotContinuous";
    case ErrorCode::TadpolePresent: return "TadpolePresent";
    case ErrorCode::NotInResolventSet: return "NotInResolventSet";
    case ErrorCode::NonpositiveKernel: return "NonpositiveKernel";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::NotAGenerator: return "NotAGenerator";
    case ErrorCode::ContourFailure: return "ContourFailure";
    case ErrorCode::LinearSolveFailure: return "LinearSolveFailure";
    case ErrorCode::CutoffTooLarge: return "CutoffTooLarge";
    case ErrorCode::SeriesDiverges: return "SeriesDiverges";
    case ErrorCode::MissingVertexMatrix: return "MissingVertexMatrix";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code)
{
}

} // namespace mgsg
