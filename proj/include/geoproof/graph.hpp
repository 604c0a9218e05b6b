#pragma once

// Bipartite statement/inference graph holding every proof of one problem.
// Statement nodes are Hypothesis, IntermediateResult or Conclusion; an
// Inference node carries the property applied and stands for the deduction
// step from its premise statements to the single statement it derives.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "geoproof/engine.hpp"
#include "geoproof/model.hpp"

namespace geoproof {

using NodeId = std::size_t;

enum class NodeClass { Hypothesis, IntermediateResult, Conclusion, Inference };

std::string_view to_string(NodeClass cls);
std::optional<NodeClass> parse_node_class(std::string_view text);

struct HpdicNode {
  NodeId id = 0;
  NodeClass cls = NodeClass::Hypothesis;
  std::optional<Fact> fact;  // statement nodes
  std::string rule;          // inference nodes
  std::string hint;          // inference nodes, rendered for this instance

  bool is_statement() const { return cls != NodeClass::Inference; }
};

// Raw material for a graph, before ids are assigned.
struct GraphInference {
  std::string rule;
  std::string hint;
  std::vector<std::string> premises;  // statement keys
  std::string derived;
};

class HpdicGraph {
 public:
  // Ids: statements sorted by key, then inferences sorted by
  // (rule, sorted premise keys, derived key). `hypotheses` lists the
  // statement keys given by the problem; inferences deriving one of them are
  // dropped. Throws ConclusionNotDerived when `conclusion` is not a
  // statement of the graph.
  static HpdicGraph assemble(std::vector<Fact> statements, const std::vector<std::string>& hypotheses,
                             std::vector<GraphInference> inferences, std::string_view conclusion);

  const std::vector<HpdicNode>& nodes() const { return nodes_; }
  const HpdicNode& node(NodeId id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }
  NodeId conclusion() const { return conclusion_; }
  std::optional<NodeId> find_statement(std::string_view key) const;

  std::size_t statement_count() const { return statement_count_; }
  std::size_t inference_count() const { return nodes_.size() - statement_count_; }

  // Statement -> its inference parents (sorted); inference -> its premises.
  std::span<const NodeId> in(NodeId id) const { return in_[id]; }
  // Statement -> inferences using it; inference -> the derived statement.
  std::span<const NodeId> out(NodeId id) const { return out_[id]; }
  NodeId derived_of(NodeId inference) const { return out_[inference].front(); }

  // (from, to) pairs sorted.
  std::vector<std::pair<NodeId, NodeId>> edges() const;
  std::size_t edge_count() const;

 private:
  std::vector<HpdicNode> nodes_;
  std::vector<std::vector<NodeId>> in_;
  std::vector<std::vector<NodeId>> out_;
  std::unordered_map<std::string, NodeId> by_key_;
  std::size_t statement_count_ = 0;
  NodeId conclusion_ = 0;
};

struct GraphOptions {
  // Keep only nodes that are derivable from the hypotheses and needed by the
  // conclusion.
  bool prune = true;
};

// Throws ConclusionNotDerived.
HpdicGraph build_graph(const DerivationRecord& record, const Fact& conclusion,
                       const GraphOptions& options = {});
HpdicGraph build_graph(const DerivationRecord& record, std::string_view conclusion_key,
                       const GraphOptions& options = {});

enum class GraphFormat { Dot, Json };

std::string export_graph(const HpdicGraph& graph, GraphFormat format);
std::string export_dot(const HpdicGraph& graph);
std::string export_json(const HpdicGraph& graph);
// Inverse of export_json. Throws InputError on malformed documents.
HpdicGraph import_json(std::string_view text);

}  // namespace geoproof
