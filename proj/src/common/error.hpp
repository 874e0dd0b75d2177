#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace foamagent {

enum class ErrorCode {
  // rag
  UnterminatedChunk,
  MissingHeaderField,
  DuplicateChunk,
  EmptyText,
  EmbedderFailure,
  EmbedderMismatch,
  DimensionMismatch,
  ZeroVector,
  EmptyCorpus,
  MalformedCorpusFile,
  EmptyIndex,
  IndexCorrupt,
  // llm
  InvalidRequest,
  TransportError,
  ProviderError,
  BackendScriptExhausted,
  ScriptMismatch,
  // agents
  MissingBinding,
  UnknownPlaceholder,
  NoHeader,
  CountMismatch,
  MalformedSubtaskLine,
  DuplicateSubtask,
  NoFence,
  UnterminatedFence,
  MissingFileMarkers,
  MissingFolderMarkers,
  ArityMismatch,
  EmptyTargets,
  // workspace
  InvalidFoamFile,
  DuplicateFile,
  IoFailure,
  // executor
  MissingAllrun,
  BackendUnavailable,
  ScenarioError,
  // eval
  InvalidInput,
  ZeroLines,
  LengthMismatch,
  ConstantSeries,
  InconsistentN,
  EmptyManifest,
  // app
  ConfigError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. `detail()` carries the machine-readable
/// subject of the error (placeholder name, file path, line number) when there
/// is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string detail = {})
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace foamagent
