#pragma once

// Live tracking of a student's resolution over a problem's proof forest.
//
// A session checks graph statements as the student supplies them, follows
// the proof with the highest share of checked statements, unlocks the
// written-proof view past a threshold, and hands out hints that escalate
// from nudges on one missing statement, to redirects towards another, to a
// referral to the teacher.
//
// A Session is single-writer; callers serialize mutating calls.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geoproof/pipeline.hpp"

namespace geoproof {

struct TutorPolicy {
  double unlock_threshold = 0.5;
  int hints_per_target = 3;  // K1
  int max_targets = 2;       // K2
  // Hypotheses start checked and are left out of completion ratios.
  bool precheck_hypotheses = true;
};

enum class SubmitOutcome { Matched, NotOnGraph, Malformed };
std::string_view to_string(SubmitOutcome outcome);

struct SubmitResult {
  SubmitOutcome outcome;
  std::optional<NodeId> node;
  std::string key;  // canonical key, empty when malformed
};

struct BestProof {
  std::size_t proof_index = 0;
  double completion = 0.0;
  std::size_t checked_in_proof = 0;
  std::size_t total_in_proof = 0;
};

struct RedactionLine {
  NodeId node;
  std::optional<std::string> text;  // nullopt renders as a blank
};

struct RedactionView {
  bool unlocked = false;
  std::vector<RedactionLine> lines;

  std::size_t blanks() const;
};

bool redaction_unlocked(double completion, double threshold);

enum class HintKind { Nudge, Redirect, TeacherReferral };
std::string_view to_string(HintKind kind);

struct Hint {
  HintKind kind;
  std::string message;
  std::optional<NodeId> target;
};

struct HintState {
  std::optional<NodeId> target;
  int hints_on_target = 0;
  int targets_tried = 0;
  std::vector<NodeId> tried;
  bool referred = false;

  friend bool operator==(const HintState&, const HintState&) = default;
};

enum class EventKind { Submit, Hint };

struct SessionEvent {
  EventKind kind;
  std::string payload;  // statement text as submitted; empty for hints
  std::string outcome;  // submit outcome or hint kind
};

// Comparable summary of a session's observable state.
struct SessionSnapshot {
  std::vector<NodeId> checked;
  std::vector<std::string> rejected;
  HintState hints;
  std::size_t best_proof = 0;
  std::size_t checked_in_best = 0;

  friend bool operator==(const SessionSnapshot&, const SessionSnapshot&) = default;
};

class Session {
 public:
  Session(std::shared_ptr<const ProblemContext> context, TutorPolicy policy = {});

  // Throws MalformedStatement when the text is not a well-formed statement
  // over declared predicates and objects (the attempt is still logged).
  SubmitResult submit_statement(std::string_view text);

  BestProof best_proof() const;
  RedactionView redaction_view() const;
  // Throws NothingMissing when the followed proof is complete.
  Hint next_hint();

  bool is_checked(NodeId node) const { return checked_[node]; }
  std::vector<NodeId> checked_nodes() const;
  const std::vector<std::string>& rejected() const { return rejected_; }
  const HintState& hint_state() const { return hints_; }
  const std::vector<SessionEvent>& events() const { return events_; }
  const ProblemContext& context() const { return *context_; }
  const TutorPolicy& policy() const { return policy_; }

  SessionSnapshot snapshot() const;
  // Events as a replay script (SUBMIT / HINT lines).
  std::string export_log() const;

 private:
  bool counts(NodeId statement) const;
  bool satisfied(NodeId statement) const;
  std::vector<NodeId> hint_candidates(const ProofTree& tree) const;
  std::string hint_message(const ProofTree& tree, NodeId target) const;

  std::shared_ptr<const ProblemContext> context_;
  TutorPolicy policy_;
  std::vector<bool> checked_;
  std::vector<std::string> rejected_;
  HintState hints_;
  std::vector<SessionEvent> events_;
};

}  // namespace geoproof
