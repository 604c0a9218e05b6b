#include "geoproof/tutor.hpp"

#include <algorithm>
#include <map>

#include "geoproof/errors.hpp"

namespace geoproof {

std::string_view to_string(SubmitOutcome outcome) {
  switch (outcome) {
    case SubmitOutcome::Matched:
      return "matched";
    case SubmitOutcome::NotOnGraph:
      return "notOnGraph";
    case SubmitOutcome::Malformed:
      return "malformed";
  }
  return "?";
}

std::string_view to_string(HintKind kind) {
  switch (kind) {
    case HintKind::Nudge:
      return "nudge";
    case HintKind::Redirect:
      return "redirect";
    case HintKind::TeacherReferral:
      return "teacherReferral";
  }
  return "?";
}

std::size_t RedactionView::blanks() const {
  return static_cast<std::size_t>(
      std::count_if(lines.begin(), lines.end(), [](const RedactionLine& l) { return !l.text; }));
}

bool redaction_unlocked(double completion, double threshold) { return completion >= threshold; }

Session::Session(std::shared_ptr<const ProblemContext> context, TutorPolicy policy)
    : context_(std::move(context)), policy_(policy), checked_(context_->graph.size(), false) {
  if (policy_.hints_per_target < 1 || policy_.max_targets < 1) {
    throw std::invalid_argument("hint policy constants must be positive");
  }
  if (policy_.precheck_hypotheses) {
    for (const auto& n : context_->graph.nodes()) {
      if (n.cls == NodeClass::Hypothesis) checked_[n.id] = true;
    }
  }
}

SubmitResult Session::submit_statement(std::string_view text) {
  const std::string payload(text);
  Fact fact = Fact::from_canonical("missing", {});
  try {
    fact = resolve_fact(parse_raw_fact(text), context_->rules, context_->problem.objects);
  } catch (const InputError& e) {
    events_.push_back({EventKind::Submit, payload, std::string(to_string(SubmitOutcome::Malformed))});
    throw MalformedStatement(payload + ": " + e.what());
  }

  SubmitResult result{SubmitOutcome::NotOnGraph, std::nullopt, fact.key()};
  if (auto node = context_->graph.find_statement(fact.key())) {
    result.outcome = SubmitOutcome::Matched;
    result.node = node;
    if (!checked_[*node]) {
      checked_[*node] = true;
      // Progress restarts the hint escalation.
      hints_ = HintState{};
    }
  } else {
    rejected_.push_back(fact.key());
  }
  events_.push_back({EventKind::Submit, payload, std::string(to_string(result.outcome))});
  return result;
}

bool Session::counts(NodeId statement) const {
  return !(policy_.precheck_hypotheses && context_->graph.node(statement).cls == NodeClass::Hypothesis);
}

bool Session::satisfied(NodeId statement) const { return checked_[statement]; }

BestProof Session::best_proof() const {
  BestProof best;
  bool first = true;
  const auto& forest = context_->forest;
  for (std::size_t i = 0; i < forest.size(); ++i) {
    std::size_t total = 0;
    std::size_t hit = 0;
    for (NodeId s : forest.tree(i).statements()) {
      if (!counts(s)) continue;
      ++total;
      if (checked_[s]) ++hit;
    }
    const double completion = total == 0 ? 1.0 : static_cast<double>(hit) / static_cast<double>(total);
    if (first || completion > best.completion) {
      best = {i, completion, hit, total};
      first = false;
    }
  }
  return best;
}

RedactionView Session::redaction_view() const {
  RedactionView view;
  if (context_->forest.size() == 0) return view;
  const BestProof best = best_proof();
  view.unlocked = redaction_unlocked(best.completion, policy_.unlock_threshold);
  const auto& graph = context_->graph;
  const ProofTree& tree = context_->forest.tree(best.proof_index);

  for (NodeId h : tree.leaves) {
    RedactionLine line{h, std::nullopt};
    if (checked_[h]) line.text = "Given: " + graph.node(h).fact->key();
    view.lines.push_back(std::move(line));
  }
  for (NodeId s : tree.topological(graph)) {
    RedactionLine line{s, std::nullopt};
    if (checked_[s]) {
      const NodeId inf = *tree.parent_of(s);
      std::string text = "By " + graph.node(inf).rule + ": ";
      const auto premises = graph.in(inf);
      for (std::size_t i = 0; i < premises.size(); ++i) {
        if (i) text += ", ";
        text += graph.node(premises[i]).fact->key();
      }
      text += " => " + graph.node(s).fact->key();
      line.text = std::move(text);
    }
    view.lines.push_back(std::move(line));
  }
  return view;
}

std::vector<NodeId> Session::hint_candidates(const ProofTree& tree) const {
  const auto& graph = context_->graph;
  std::map<NodeId, int> depth;
  for (NodeId l : tree.leaves) depth[l] = 0;
  for (NodeId s : tree.topological(graph)) {
    int d = 0;
    for (NodeId p : graph.in(*tree.parent_of(s))) d = std::max(d, depth[p] + 1);
    depth[s] = d;
  }

  struct Candidate {
    bool frontier;
    int depth;
    std::string key;
    NodeId node;
  };
  std::vector<Candidate> found;
  for (NodeId s : tree.statements()) {
    if (!counts(s) || checked_[s]) continue;
    bool frontier = true;
    if (auto inf = tree.parent_of(s)) {
      for (NodeId p : graph.in(*inf)) frontier = frontier && satisfied(p);
    }
    found.push_back({frontier, depth[s], graph.node(s).fact->key(), s});
  }
  std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(b.frontier, a.depth, a.key) < std::tie(a.frontier, b.depth, b.key);
  });
  std::vector<NodeId> out;
  for (const auto& c : found) out.push_back(c.node);
  return out;
}

std::string Session::hint_message(const ProofTree& tree, NodeId target) const {
  const auto& graph = context_->graph;
  const std::string& key = graph.node(target).fact->key();
  auto inf = tree.parent_of(target);
  if (!inf) return "Look again at what the problem gives you: " + key + ".";
  const std::string& hint = graph.node(*inf).hint;
  if (!hint.empty()) return hint;
  return "Which property lets you conclude " + key + "?";
}

Hint Session::next_hint() {
  auto log = [&](const Hint& h) {
    events_.push_back({EventKind::Hint, "", std::string(to_string(h.kind))});
    return h;
  };
  const Hint referral{HintKind::TeacherReferral,
                      "You have explored several directions without success: please ask your teacher for help.",
                      std::nullopt};
  if (hints_.referred) return log(referral);

  if (context_->forest.size() == 0) throw NothingMissing("no proof to follow");
  const ProofTree& tree = context_->forest.tree(best_proof().proof_index);
  const std::vector<NodeId> candidates = hint_candidates(tree);
  if (candidates.empty()) {
    events_.push_back({EventKind::Hint, "", "nothingMissing"});
    throw NothingMissing("the followed proof is complete");
  }

  if (!hints_.target) {
    hints_.target = candidates.front();
    hints_.hints_on_target = 1;
    hints_.targets_tried = 1;
    hints_.tried = {candidates.front()};
    return log({HintKind::Nudge, hint_message(tree, *hints_.target), hints_.target});
  }
  if (hints_.hints_on_target < policy_.hints_per_target) {
    ++hints_.hints_on_target;
    return log({HintKind::Nudge, hint_message(tree, *hints_.target), hints_.target});
  }
  if (hints_.targets_tried < policy_.max_targets) {
    for (NodeId c : candidates) {
      if (std::find(hints_.tried.begin(), hints_.tried.end(), c) != hints_.tried.end()) continue;
      hints_.target = c;
      hints_.hints_on_target = 1;
      ++hints_.targets_tried;
      hints_.tried.push_back(c);
      return log({HintKind::Redirect, hint_message(tree, c), c});
    }
  }
  hints_.referred = true;
  return log(referral);
}

std::vector<NodeId> Session::checked_nodes() const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < checked_.size(); ++i) {
    if (checked_[i]) out.push_back(i);
  }
  return out;
}

SessionSnapshot Session::snapshot() const {
  SessionSnapshot s;
  s.checked = checked_nodes();
  s.rejected = rejected_;
  s.hints = hints_;
  if (context_->forest.size() != 0) {
    const BestProof b = best_proof();
    s.best_proof = b.proof_index;
    s.checked_in_best = b.checked_in_proof;
  }
  return s;
}

std::string Session::export_log() const {
  std::string out;
  for (const auto& e : events_) {
    out += e.kind == EventKind::Submit ? "SUBMIT " + e.payload : std::string("HINT");
    out += "\n";
  }
  return out;
}

}  // namespace geoproof
