#include "orchestrator/pipeline.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "agents/templates.hpp"
#include "common/digest.hpp"
#include "common/error.hpp"
#include "common/text.hpp"

using nlohmann::json;

namespace foamagent::orchestrator {

namespace {

// Ends the run; carries the reason out of nested steps.
struct RunAborted {
  StopReason reason;
  std::string message;
};

StopReason reason_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidRequest:
    case ErrorCode::TransportError:
    case ErrorCode::ProviderError:
    case ErrorCode::BackendScriptExhausted:
    case ErrorCode::ScriptMismatch:
      return StopReason::LlmFailure;
    case ErrorCode::EmptyText:
    case ErrorCode::EmbedderFailure:
    case ErrorCode::EmbedderMismatch:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::ZeroVector:
    case ErrorCode::EmptyIndex:
    case ErrorCode::IndexCorrupt:
      return StopReason::RetrievalFailure;
    case ErrorCode::NoHeader:
    case ErrorCode::CountMismatch:
    case ErrorCode::MalformedSubtaskLine:
    case ErrorCode::DuplicateSubtask:
    case ErrorCode::NoFence:
    case ErrorCode::UnterminatedFence:
    case ErrorCode::MissingFileMarkers:
    case ErrorCode::MissingFolderMarkers:
    case ErrorCode::ArityMismatch:
    case ErrorCode::EmptyTargets:
    case ErrorCode::InvalidFoamFile:
    case ErrorCode::DuplicateFile:
      return StopReason::ParseFailure;
    default:
      return StopReason::ExecutionFailure;
  }
}

bool is_parse_error(ErrorCode code) { return reason_for(code) == StopReason::ParseFailure; }

std::string list_text(const std::vector<std::string>& items) { return text::python_list(items); }

class Pipeline {
 public:
  Pipeline(const std::string& requirement, const std::vector<executor::RequirementCheck>& checks,
           const PipelineConfig& config, const PipelineBackends& backends)
      : requirement_(requirement), checks_(checks), config_(config), backends_(backends) {}

  RunOutcome run(const ConfirmFn& confirm);

 private:
  std::string call_llm(const std::string& role, const std::string& action, agents::TemplateId id,
                       const agents::Bindings& bindings, std::vector<std::string> context_ids,
                       const std::string& extra = {});

  // Asks, parses, and on a parse error asks once more with the error appended.
  template <typename Parse>
  auto ask_parsed(const std::string& role, const std::string& action, agents::TemplateId id,
                  const agents::Bindings& bindings, const std::vector<std::string>& context_ids,
                  Parse parse) -> decltype(parse(std::string()));

  void retrieve_case();
  void create_architecture();
  void write_input_file(const agents::Subtask& subtask);
  void write_allrun();
  void execute_and_classify();
  void review_step();
  std::size_t revise_architecture(const std::vector<std::pair<std::string, std::string>>& named,
                           const std::string& command, const std::string& error);
  void rewrite_files(const std::vector<std::pair<std::string, std::string>>& files,
                     const std::string& command, const std::string& error);

  const rag::TutorialChunk* file_context_for(const agents::Subtask& subtask,
                                             const std::vector<double>& query);
  std::pair<std::string, std::string> failure_context() const;
  void add_entry(TranscriptEntry entry) { outcome_.transcript.push_back(std::move(entry)); }

  const std::string& requirement_;
  const std::vector<executor::RequirementCheck>& checks_;
  const PipelineConfig& config_;
  const PipelineBackends& backends_;

  RunState state_;
  RunOutcome outcome_;
  const rag::TutorialChunk* similar_case_ = nullptr;
  std::string tutorial_text_ = "None";
  executor::LogSignals signals_;
};

std::string Pipeline::call_llm(const std::string& role, const std::string& action,
                               agents::TemplateId id, const agents::Bindings& bindings,
                               std::vector<std::string> context_ids, const std::string& extra) {
  const auto tpl = agents::load_template(id, config_.template_dir);
  auto prompt = agents::render_prompt(tpl, bindings);
  if (!extra.empty()) prompt += "\n\n" + extra;

  llm::ChatRequest request;
  request.messages.push_back({llm::Role::User, prompt});
  request.params = {config_.model_id, config_.temperature, config_.max_output_tokens};
  const auto completion = llm::complete_chat(request, *backends_.llm);
  outcome_.ledger.record(role + "/" + std::string(agents::to_string(id)), completion.usage);

  TranscriptEntry e;
  e.kind = "llm";
  e.role = role;
  e.action = action;
  e.iteration = state_.iteration;
  e.prompt_digest = sha256_hex(prompt);
  e.reply_digest = sha256_hex(completion.text);
  e.usage = completion.usage;
  e.context_ids = std::move(context_ids);
  e.prompt = std::move(prompt);
  e.reply = completion.text;
  add_entry(std::move(e));
  return completion.text;
}

template <typename Parse>
auto Pipeline::ask_parsed(const std::string& role, const std::string& action,
                          agents::TemplateId id, const agents::Bindings& bindings,
                          const std::vector<std::string>& context_ids, Parse parse)
    -> decltype(parse(std::string())) {
  std::string reply = call_llm(role, action, id, bindings, context_ids);
  try {
    return parse(reply);
  } catch (const Error& first) {
    if (!is_parse_error(first.code())) throw;
    const std::string note = "Your previous reply could not be used: " + std::string(first.what()) +
                             ". Answer again following the required format exactly.";
    reply = call_llm(role, action + " (retry)", id, bindings, context_ids, note);
    try {
      return parse(reply);
    } catch (const Error& second) {
      if (!is_parse_error(second.code())) throw;
      throw RunAborted{StopReason::ParseFailure, action + ": " + second.what()};
    }
  }
}

void Pipeline::retrieve_case() {
  if (!config_.flags.enable_rag) return;
  if (!backends_.db || !backends_.embedder) {
    throw RunAborted{StopReason::RetrievalFailure, "retrieval enabled but no database is loaded"};
  }
  std::string query = requirement_;
  if (config_.normalize_query) {
    const auto reply = call_llm("Architect", "FindSimilarQuery", agents::TemplateId::FindSimilarQuery,
                                {{"requirement", requirement_}}, {});
    const auto d = agents::parse_case_descriptor(reply);
    std::string normalized;
    if (d.name) normalized += "case name: " + *d.name + "\n";
    if (d.domain) normalized += "case domain: " + *d.domain + "\n";
    if (d.category) normalized += "case category: " + *d.category + "\n";
    if (d.solver) normalized += "case solver: " + *d.solver + "\n";
    if (!normalized.empty()) query = normalized + requirement_;
  }
  const auto hits = rag::retrieve_similar(backends_.db->architecture, query, config_.top_k,
                                          *backends_.embedder);
  similar_case_ = hits.front().chunk;
  std::vector<std::string> parts;
  TranscriptEntry e;
  e.kind = "retrieval";
  e.role = "Architect";
  e.action = "RetrieveArchitecture";
  e.iteration = state_.iteration;
  json scores = json::array();
  for (const auto& h : hits) {
    parts.push_back(rag::serialize_chunk(*h.chunk));
    e.context_ids.push_back(h.chunk->id);
    scores.push_back(h.score);
  }
  e.detail["scores"] = std::move(scores);
  tutorial_text_ = text::join(parts, "\n\n");
  add_entry(std::move(e));
}

void Pipeline::create_architecture() {
  std::vector<std::string> ctx;
  if (similar_case_) ctx.push_back(similar_case_->id);
  std::string reply_text;
  auto subtasks = ask_parsed(
      "Architect", "CreateArchitecture", agents::TemplateId::CreateArchitecture,
      {{"requirement", requirement_}, {"tutorial", tutorial_text_}}, ctx,
      [&reply_text](const std::string& reply) {
        auto list = agents::parse_subtask_list(reply);
        if (list.empty()) throw Error(ErrorCode::CountMismatch, "the foamfiles list is empty");
        reply_text = reply;
        return list;
      });
  auto& arch = state_.architecture;
  const auto d = agents::parse_case_descriptor(reply_text);
  const rag::CaseInfo inherited = similar_case_ ? similar_case_->info : rag::CaseInfo{"case", "None", "None", "None"};
  arch.case_name = d.name.value_or(inherited.name);
  arch.case_domain = d.domain.value_or(inherited.domain);
  arch.case_category = d.category.value_or(inherited.category);
  arch.case_solver = d.solver.value_or(inherited.solver);
  arch.subtasks = std::move(subtasks);
}

const rag::TutorialChunk* Pipeline::file_context_for(const agents::Subtask& subtask,
                                                     const std::vector<double>& query) {
  const auto& index = backends_.db->file_context;
  if (index.entries.empty()) return nullptr;
  if (similar_case_) {
    const auto id = rag::make_chunk_id(rag::ChunkKind::FileContext, similar_case_->info.name,
                                       subtask.folder, subtask.file_name);
    if (const auto* exact = index.find(id)) return exact;
  }
  const rag::TutorialChunk* best = nullptr;
  double best_score = -2.0;
  for (int pass = 0; pass < 2 && !best; ++pass) {
    for (const auto& chunk : index.entries) {
      if (chunk.file_name != subtask.file_name) continue;
      if (pass == 0 && chunk.folder != subtask.folder) continue;
      const double s = rag::cosine_similarity(query, chunk.embedding);
      if (s > best_score || (s == best_score && best && chunk.id < best->id)) {
        best = &chunk;
        best_score = s;
      }
    }
  }
  if (best) return best;
  return rag::retrieve_by_vector(index, query, 1).front().chunk;
}

void Pipeline::write_input_file(const agents::Subtask& subtask) {
  const auto task = agents::subtask_text(subtask);
  std::string reference = "None";
  std::vector<std::string> ctx;
  if (config_.flags.enable_rag) {
    const auto query = rag::embed_text(task, *backends_.embedder);
    if (const auto* chunk = file_context_for(subtask, query)) {
      reference = rag::serialize_chunk(*chunk);
      ctx.push_back(chunk->id);
      TranscriptEntry e;
      e.kind = "retrieval";
      e.role = "InputWriter";
      e.action = "RetrieveFileContext:" + subtask.folder + "/" + subtask.file_name;
      e.iteration = state_.iteration;
      e.context_ids = ctx;
      e.detail["score"] = rag::cosine_similarity(query, chunk->embedding);
      add_entry(std::move(e));
    }
  }
  auto content = ask_parsed("InputWriter", "WriteInputFile:" + subtask.folder + "/" + subtask.file_name,
                            agents::TemplateId::WriteInputFile,
                            {{"requirement", task}, {"tutorial_file", reference}}, ctx,
                            [](const std::string& reply) {
                              auto block = agents::extract_fenced_block(reply);
                              if (text::trim(block).empty()) {
                                throw Error(ErrorCode::NoFence, "the fenced block is empty");
                              }
                              return block;
                            });
  if (!content.ends_with('\n')) content += '\n';
  state_.workspace.upsert({subtask.file_name, subtask.folder, std::move(content)});
}

void Pipeline::write_allrun() {
  std::string reference = "None";
  std::vector<std::string> ctx;
  if (config_.flags.enable_rag && !backends_.db->allrun.entries.empty()) {
    const rag::TutorialChunk* chunk = nullptr;
    if (similar_case_) {
      chunk = backends_.db->allrun.find(
          rag::make_chunk_id(rag::ChunkKind::Allrun, similar_case_->info.name, {}, {}));
    }
    if (!chunk) {
      chunk = rag::retrieve_similar(backends_.db->allrun, requirement_, 1, *backends_.embedder)
                  .front()
                  .chunk;
    }
    reference = rag::serialize_chunk(*chunk);
    ctx.push_back(chunk->id);
    TranscriptEntry e;
    e.kind = "retrieval";
    e.role = "Runner";
    e.action = "RetrieveAllrun";
    e.iteration = state_.iteration;
    e.context_ids = ctx;
    add_entry(std::move(e));
  }
  std::vector<std::string> commands(config_.command_whitelist.begin(), config_.command_whitelist.end());
  std::vector<std::string> runs(config_.run_whitelist.begin(), config_.run_whitelist.end());
  auto script = ask_parsed("Runner", "WriteAllrun", agents::TemplateId::WriteAllrun,
                           {{"requirement", requirement_},
                            {"file_list", list_text(state_.architecture.file_names())},
                            {"tutorial", reference},
                            {"commands", list_text(commands)},
                            {"runlists", list_text(runs)}},
                           ctx, [](const std::string& reply) {
                             auto block = agents::extract_fenced_block(reply);
                             if (text::trim(block).empty()) {
                               throw Error(ErrorCode::NoFence, "the fenced block is empty");
                             }
                             return block;
                           });
  if (!script.ends_with('\n')) script += '\n';
  state_.workspace.allrun = std::move(script);
}

void Pipeline::execute_and_classify() {
  workspace::materialize_case(state_.workspace);
  auto report = executor::execute_allrun(state_.workspace, *backends_.exec, config_.exec_timeout);
  signals_ = executor::scan_log_signals(report, config_.signal_rules);
  outcome_.executability = executor::classify_executability(
      signals_, executor::evaluate_checks(state_.workspace, checks_));

  TranscriptEntry e;
  e.kind = "execution";
  e.role = "Runner";
  e.action = "RunAllrun";
  e.iteration = state_.iteration;
  e.detail = {{"score", outcome_.executability.score},
              {"mesh_ok", signals_.mesh_ok},
              {"solver_started", signals_.solver_started},
              {"diverged", signals_.diverged},
              {"end_time_reached", signals_.end_time_reached},
              {"steps", report.steps.size()}};
  if (report.failed_command) e.detail["failed_command"] = *report.failed_command;
  add_entry(std::move(e));
  state_.last_report = std::move(report);
}

std::pair<std::string, std::string> Pipeline::failure_context() const {
  const auto& report = *state_.last_report;
  if (report.failed_command) {
    return {*report.failed_command, report.error_excerpt.value_or("")};
  }
  const executor::StepResult* solver = nullptr;
  for (const auto& s : report.steps) {
    if (s.role == executor::StepRole::Solver) solver = &s;
  }
  std::string error = "The simulation did not reach endTime";
  if (report.end_time) {
    std::ostringstream os;
    os << *report.end_time;
    error += " (" + os.str() + ")";
  }
  error += ".";
  if (solver) return {solver->command, error + "\n" + text::tail_lines(solver->stdout_tail, 40)};
  return {"Allrun", error + " No solver step was found in the Allrun."};
}

void Pipeline::review_step() {
  const auto [command, raw_error] = failure_context();
  const auto error = agents::truncate_error(raw_error, config_.error_budget);

  auto files = state_.architecture.file_names();
  auto folders = state_.architecture.folders();
  files.push_back("Allrun");
  folders.push_back(".");

  const auto decision = ask_parsed(
      "Reviewer", "ReviewArchitecture", agents::TemplateId::ReviewArchitecture,
      {{"command", command},
       {"error", error},
       {"file_list", list_text(files)},
       {"folder_list", list_text(folders)}},
      {}, [&](const std::string& reply) {
        const auto targets = agents::parse_review_targets(reply);
        return agents::decide_review_action(targets, state_.architecture, raw_error,
                                            config_.missing_file_patterns);
      });

  TranscriptEntry e;
  e.kind = "review";
  e.role = "Reviewer";
  e.action = std::string(agents::to_string(decision.target));
  e.iteration = state_.iteration;
  json named = json::array();
  for (const auto& [f, d] : decision.files) named.push_back(d.empty() ? f : d + "/" + f);
  e.detail = {{"files", named}, {"command", command}};

  if (decision.target == agents::ReviewTarget::ArchitectureRevision &&
      config_.flags.enable_review_architecture) {
    add_entry(std::move(e));
    const auto review_entry = outcome_.transcript.size() - 1;
    const auto added = revise_architecture(decision.files, command, error);
    outcome_.transcript[review_entry].detail["added"] = added;
    return;
  }
  std::vector<std::pair<std::string, std::string>> present;
  for (const auto& [f, d] : decision.files) {
    if (f == "Allrun" || state_.architecture.find(f)) present.emplace_back(f, d);
  }
  if (decision.target == agents::ReviewTarget::ArchitectureRevision) e.detail["forced"] = true;
  add_entry(std::move(e));
  rewrite_files(present, command, error);
}

std::size_t Pipeline::revise_architecture(const std::vector<std::pair<std::string, std::string>>& named,
                                   const std::string& command, const std::string& error) {
  std::vector<std::string> named_files;
  for (const auto& [f, d] : named) named_files.push_back(f);
  const std::string augmented =
      requirement_ + "\nThe current input file list " + list_text(state_.architecture.file_names()) +
      " encountered the following error when " + command + " was executed:\n" + error +
      "\nFiles related to the error: " + list_text(named_files) +
      ". Add any missing foamfiles to the list.";
  std::vector<std::string> ctx;
  if (similar_case_) ctx.push_back(similar_case_->id);
  const auto revised = ask_parsed(
      "Architect", "ReviseArchitecture", agents::TemplateId::CreateArchitecture,
      {{"requirement", augmented}, {"tutorial", tutorial_text_}}, ctx,
      [](const std::string& reply) { return agents::parse_subtask_list(reply); });

  int next_index = 0;
  for (const auto& s : state_.architecture.subtasks) next_index = std::max(next_index, s.index);
  std::vector<agents::Subtask> added;
  for (auto s : revised) {
    const bool known = std::any_of(state_.architecture.subtasks.begin(), state_.architecture.subtasks.end(),
                                   [&](const agents::Subtask& t) {
                                     return t.file_name == s.file_name && t.folder == s.folder;
                                   });
    if (known) continue;
    s.index = ++next_index;
    s.requirement_echo = requirement_;
    state_.architecture.subtasks.push_back(s);
    added.push_back(s);
  }
  for (const auto& s : added) write_input_file(s);
  return added.size();
}

void Pipeline::rewrite_files(const std::vector<std::pair<std::string, std::string>>& files,
                             const std::string& command, const std::string& error) {
  if (files.empty()) return;
  std::vector<std::string> names, folders;
  std::string related;
  for (const auto& [f, d] : files) {
    names.push_back(f);
    folders.push_back(d.empty() ? "." : d);
    const std::string* content = nullptr;
    if (f == "Allrun") {
      if (state_.workspace.allrun) content = &*state_.workspace.allrun;
    } else if (const auto* file = state_.workspace.find(f, d)) {
      content = &file->content;
    }
    related += "The original " + f + " in " + (d.empty() ? "." : d) + " folder:\n```\n" +
               (content ? *content : std::string()) + "```\n";
  }
  for (const auto& [f, d] : files) {
    auto content = ask_parsed(
        "InputWriter", "ReviewFileContext:" + (d.empty() ? f : d + "/" + f),
        agents::TemplateId::ReviewFileContext,
        {{"file_name", f},
         {"file_folder", d.empty() ? "." : d},
         {"error", error},
         {"file_list", list_text(names)},
         {"folder_list", list_text(folders)},
         {"command", command},
         {"related_files", related}},
        {}, [](const std::string& reply) {
          auto block = agents::extract_fenced_block(reply);
          if (text::trim(block).empty()) throw Error(ErrorCode::NoFence, "the fenced block is empty");
          return block;
        });
    if (!content.ends_with('\n')) content += '\n';
    if (f == "Allrun") {
      state_.workspace.allrun = std::move(content);
    } else {
      state_.workspace.upsert({f, d, std::move(content)});
    }
  }
}

RunOutcome Pipeline::run(const ConfirmFn& confirm) {
  const auto started = std::chrono::steady_clock::now();
  outcome_.requirement = requirement_;
  bool executed = false;
  try {
    try {
      retrieve_case();
      create_architecture();
      state_.workspace.root = config_.workspace_parent / (state_.architecture.case_name + "-" + config_.run_id);
      for (const auto& s : state_.architecture.subtasks) write_input_file(s);
      write_allrun();
      execute_and_classify();
      executed = true;
      outcome_.stop_reason = StopReason::Success;
      while (outcome_.executability.score < 3) {
        if (!config_.flags.enable_reviewer) {
          outcome_.stop_reason = StopReason::ReviewerDisabled;
          break;
        }
        const auto verdict = budget_check(state_, outcome_.ledger, config_);
        if (verdict.stop) {
          outcome_.stop_reason = verdict.reason;
          break;
        }
        ++state_.iteration;
        review_step();
        execute_and_classify();
      }
    } catch (const Error& e) {
      throw RunAborted{reason_for(e.code()), std::string(to_string(e.code())) + ": " + e.what()};
    }
  } catch (const RunAborted& aborted) {
    outcome_.stop_reason = aborted.reason;
    outcome_.error = aborted.message;
    TranscriptEntry e;
    e.kind = "error";
    e.role = "Orchestrator";
    e.action = std::string(to_string(aborted.reason));
    e.iteration = state_.iteration;
    e.detail["message"] = aborted.message;
    add_entry(std::move(e));
    if (!executed) outcome_.executability = {0, "run aborted before execution", {}};
  }

  if (confirm && outcome_.executability.score >= 3 && state_.last_report) {
    if (const auto verdict = confirm(requirement_, outcome_)) {
      outcome_.executability = executor::classify_executability(
          signals_, outcome_.executability.requirement_checks, verdict);
      TranscriptEntry e;
      e.kind = "review";
      e.role = "Human";
      e.action = "ConfirmRequirement";
      e.iteration = state_.iteration;
      e.detail = {{"confirmed", *verdict}, {"score", outcome_.executability.score}};
      add_entry(std::move(e));
    }
  }

  outcome_.iterations = state_.iteration;
  outcome_.architecture = state_.architecture;
  outcome_.workspace_root = state_.workspace.root;
  outcome_.code_stats = workspace::collect_code_stats(state_.workspace);
  outcome_.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return std::move(outcome_);
}

}  // namespace

void validate(const PipelineConfig& config) {
  if (config.max_iterations < 1) throw Error(ErrorCode::ConfigError, "max_iterations must be >= 1");
  if (config.top_k < 1) throw Error(ErrorCode::ConfigError, "top_k must be >= 1");
  if (!(config.temperature >= 0.0 && config.temperature <= 1.0)) {
    throw Error(ErrorCode::ConfigError, "temperature must lie in [0, 1]");
  }
  if (config.token_budget && *config.token_budget == 0) {
    throw Error(ErrorCode::ConfigError, "token_budget must be positive");
  }
  if (config.max_output_tokens < 1) throw Error(ErrorCode::ConfigError, "max_output_tokens must be >= 1");
}

std::string_view to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::Success: return "success";
    case StopReason::ReviewerDisabled: return "reviewer-disabled";
    case StopReason::IterationCap: return "iteration-cap";
    case StopReason::TokenBudget: return "token-budget";
    case StopReason::ParseFailure: return "parse-failure";
    case StopReason::LlmFailure: return "llm-failure";
    case StopReason::RetrievalFailure: return "retrieval-failure";
    case StopReason::ExecutionFailure: return "execution-failure";
  }
  return "unknown";
}

StopReason stop_reason_from_string(std::string_view name) {
  for (const auto r : {StopReason::Success, StopReason::ReviewerDisabled, StopReason::IterationCap,
                       StopReason::TokenBudget, StopReason::ParseFailure, StopReason::LlmFailure,
                       StopReason::RetrievalFailure, StopReason::ExecutionFailure}) {
    if (to_string(r) == name) return r;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown stop reason '" + std::string(name) + "'");
}

BudgetVerdict budget_check(const RunState& state, const llm::UsageLedger& ledger,
                           const PipelineConfig& config) {
  if (state.iteration >= config.max_iterations) return {true, StopReason::IterationCap};
  if (config.token_budget && ledger.total_tokens() >= *config.token_budget) {
    return {true, StopReason::TokenBudget};
  }
  return {};
}

RunOutcome run_pipeline(const std::string& requirement,
                        const std::vector<executor::RequirementCheck>& checks,
                        const PipelineConfig& config, const PipelineBackends& backends,
                        const ConfirmFn& confirm) {
  validate(config);
  if (!backends.llm || !backends.exec) {
    throw Error(ErrorCode::InvalidArgument, "run_pipeline needs an LLM and an execution backend");
  }
  if (text::trim(requirement).empty()) {
    throw Error(ErrorCode::InvalidArgument, "requirement is empty");
  }
  return Pipeline(requirement, checks, config, backends).run(confirm);
}

}  // namespace foamagent::orchestrator
