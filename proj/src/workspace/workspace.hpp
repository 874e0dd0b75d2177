#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace foamagent::workspace {

struct FoamFile {
  std::string file_name;
  std::string folder;
  std::string content;

  bool operator==(const FoamFile&) const = default;
};

struct CaseWorkspace {
  std::filesystem::path root;
  std::vector<FoamFile> files;
  std::optional<std::string> allrun;

  FoamFile* find(std::string_view file_name, std::string_view folder);
  const FoamFile* find(std::string_view file_name, std::string_view folder) const;

  /// Replaces the (file_name, folder) entry or appends a new one.
  void upsert(FoamFile file);
};

/// Writes every file to root/folder/file_name and the Allrun (mode 0755).
/// Returns the written paths, Allrun last. Throws DuplicateFile,
/// InvalidFoamFile (empty content, path separators in the name), IoFailure.
std::vector<std::filesystem::path> materialize_case(const CaseWorkspace& workspace);

/// Reads a case tree back: every file below a sub-directory, plus Allrun.
CaseWorkspace read_case_tree(const std::filesystem::path& root);

/// Empty when the content carries a `FoamFile { ... class x; object y; }`
/// block; otherwise the violations.
std::vector<std::string> validate_foamfile_header(std::string_view content);

using NameSet = std::set<std::string, std::less<>>;

/// One name per line, `#` starts a comment.
NameSet parse_whitelist(std::string_view text);
const NameSet& default_command_whitelist();
const NameSet& default_run_whitelist();

/// Empty when every line is boilerplate, a comment, `runApplication X` /
/// `runParallel X` with X in run_whitelist, or a bare command in
/// command_whitelist, and at least one application is run.
std::vector<std::string> validate_allrun_script(std::string_view script,
                                                const NameSet& command_whitelist,
                                                const NameSet& run_whitelist);

struct AllrunStep {
  std::size_t line = 0;
  std::string command;       // the logical line as written
  std::string program;       // runApplication target or bare command
  bool run_helper = false;   // invoked through runApplication/runParallel
};

/// Executable lines of an Allrun (boilerplate and comments dropped,
/// backslash continuations joined).
std::vector<AllrunStep> allrun_steps(std::string_view script);

struct CodeStats {
  std::size_t file_count = 0;
  double lines_per_file = 0.0;
  std::size_t total_lines = 0;

  bool operator==(const CodeStats&) const = default;
};

/// Value of a `key value;` entry of an OpenFOAM dictionary (first match,
/// quotes removed), e.g. dictionary_entry(controlDict, "endTime").
std::optional<std::string> dictionary_entry(std::string_view content, std::string_view key);

/// Counts over the foamfiles only; the Allrun is not an input file.
CodeStats collect_code_stats(const CaseWorkspace& workspace);

}  // namespace foamagent::workspace
