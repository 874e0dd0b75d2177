#pragma once

#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace foamagent::agents {

struct Subtask {
  int index = 0;
  std::string file_name;
  std::string folder;
  std::string requirement_echo;

  bool operator==(const Subtask&) const = default;
};

struct CaseArchitecture {
  std::string case_name;
  std::string case_domain;
  std::string case_category;
  std::string case_solver;
  std::vector<Subtask> subtasks;

  const Subtask* find(std::string_view file_name) const;
  std::vector<std::string> file_names() const;
  std::vector<std::string> folders() const;
};

/// Parses the Architect's reply: an optional fence, a header
/// `splits into N subtasks:` and N lines `subtaskK: to Write a OpenFoam <file>
/// foamfile in <folder> folder that could be used to meet user
/// requirement:<text>.` (wrapped lines are joined). Throws NoHeader,
/// CountMismatch, MalformedSubtaskLine (detail = 1-based line number),
/// DuplicateSubtask.
std::vector<Subtask> parse_subtask_list(std::string_view reply);

/// Canonical text that parse_subtask_list maps back to `subtasks`.
std::string serialize_subtask_list(const std::vector<Subtask>& subtasks);

/// The subtask sentence as sent to the InputWriter.
std::string subtask_text(const Subtask& subtask);

struct CaseDescriptor {
  std::optional<std::string> name;
  std::optional<std::string> domain;
  std::optional<std::string> category;
  std::optional<std::string> solver;
};

/// Labeled `case name:`/`case domain:`/`case category:`/`case solver:` lines.
CaseDescriptor parse_case_descriptor(std::string_view reply);

/// Content of the first ``` fence with an optional tag on the opening line
/// removed and one trailing newline trimmed. A reply with no ``` at all falls
/// back to a `` fence. Throws NoFence, UnterminatedFence.
std::string extract_fenced_block(std::string_view reply);

struct ReviewTargets {
  std::vector<std::string> files;
  std::vector<std::string> folders;

  bool operator==(const ReviewTargets&) const = default;
};

/// `###f1, f2### in ``d1, d2```. Throws MissingFileMarkers,
/// MissingFolderMarkers, ArityMismatch.
ReviewTargets parse_review_targets(std::string_view reply);

enum class ReviewTarget { ArchitectureRevision, ContentRewrite };

std::string_view to_string(ReviewTarget target) noexcept;

struct ReviewDecision {
  ReviewTarget target = ReviewTarget::ContentRewrite;
  std::vector<std::pair<std::string, std::string>> files;  // (file, folder)

  bool operator==(const ReviewDecision&) const = default;
};

/// Patterns that mark an error as caused by a missing input file.
std::vector<std::string> default_missing_file_patterns();

/// ArchitectureRevision when a named file is not in the architecture (Allrun
/// always counts as present) or the error matches a missing-file pattern;
/// otherwise ContentRewrite of the named files with folders taken from the
/// architecture. Throws EmptyTargets.
ReviewDecision decide_review_action(const ReviewTargets& targets,
                                    const CaseArchitecture& architecture,
                                    std::string_view error_text,
                                    const std::vector<std::string>& missing_file_patterns =
                                        default_missing_file_patterns());

/// Keeps the first quarter and last three quarters of `budget` characters
/// with an elision marker between when `error` is longer than `budget`.
std::string truncate_error(std::string_view error, std::size_t budget = 8000);

}  // namespace foamagent::agents
