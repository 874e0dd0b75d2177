#include "common/error.hpp"

namespace foamagent {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnterminatedChunk: return "UnterminatedChunk";
    case ErrorCode::MissingHeaderField: return "MissingHeaderField";
    case ErrorCode::DuplicateChunk: return "DuplicateChunk";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::EmbedderFailure: return "EmbedderFailure";
    case ErrorCode::EmbedderMismatch: return "EmbedderMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::MalformedCorpusFile: return "MalformedCorpusFile";
    case ErrorCode::EmptyIndex: return "EmptyIndex";
    case ErrorCode::IndexCorrupt: return "IndexCorrupt";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::TransportError: return "TransportError";
    case ErrorCode::ProviderError: return "ProviderError";
    case ErrorCode::BackendScriptExhausted: return "BackendScriptExhausted";
    case ErrorCode::ScriptMismatch: return "ScriptMismatch";
    case ErrorCode::MissingBinding: return "MissingBinding";
    case ErrorCode::UnknownPlaceholder: return "UnknownPlaceholder";
    case ErrorCode::NoHeader: return "NoHeader";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::MalformedSubtaskLine: return "MalformedSubtaskLine";
    case ErrorCode::DuplicateSubtask: return "DuplicateSubtask";
    case ErrorCode::NoFence: return "NoFence";
    case ErrorCode::UnterminatedFence: return "UnterminatedFence";
    case ErrorCode::MissingFileMarkers: return "MissingFileMarkers";
    case ErrorCode::MissingFolderMarkers: return "MissingFolderMarkers";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::EmptyTargets: return "EmptyTargets";
    case ErrorCode::InvalidFoamFile: return "InvalidFoamFile";
    case ErrorCode::DuplicateFile: return "DuplicateFile";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::MissingAllrun: return "MissingAllrun";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::ScenarioError: return "ScenarioError";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::ZeroLines: return "ZeroLines";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::InconsistentN: return "InconsistentN";
    case ErrorCode::EmptyManifest: return "EmptyManifest";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace foamagent
