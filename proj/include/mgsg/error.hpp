#pragma once

#include <stdexcept>
#include <string>

namespace mgsg {

enum class ErrorCode {
    DisconnectedGraph,
    ZeroDegreeVertex,
    NonpositiveLength,
    DanglingVertexReference,
    DuplicateId,
    MissingEndpointDatum,
    DimensionMismatch,
    InvalidParams,
    MissingVertex,
    RankDeficient,
    DegreeTooSmall,
    SingularAtK,
    PoleAtK,
    NotLocal,
    NotLocalInput,
    NotContinuous,
    TadpolePresent,
    NotInResolventSet,
    NonpositiveKernel,
    EmptyRange,
    NotAGenerator,
    ContourFailure,
    LinearSolveFailure,
    CutoffTooLarge,
    SeriesDiverges,
    MissingVertexMatrix,
    ParseError,
    SchemaError,
    UnknownCommand,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace mgsg
