#include "geoproof/graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "geoproof/errors.hpp"
#include "json.hpp"

namespace geoproof {

std::string_view to_string(NodeClass cls) {
  switch (cls) {
    case NodeClass::Hypothesis:
      return "Hypothesis";
    case NodeClass::IntermediateResult:
      return "IntermediateResult";
    case NodeClass::Conclusion:
      return "Conclusion";
    case NodeClass::Inference:
      return "Inference";
  }
  return "?";
}

std::optional<NodeClass> parse_node_class(std::string_view text) {
  for (auto c : {NodeClass::Hypothesis, NodeClass::IntermediateResult, NodeClass::Conclusion,
                 NodeClass::Inference}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

HpdicGraph HpdicGraph::assemble(std::vector<Fact> statements, const std::vector<std::string>& hypotheses,
                                std::vector<GraphInference> inferences, std::string_view conclusion) {
  std::sort(statements.begin(), statements.end());
  statements.erase(std::unique(statements.begin(), statements.end()), statements.end());
  const std::set<std::string, std::less<>> hyp(hypotheses.begin(), hypotheses.end());

  for (auto& inf : inferences) {
    std::sort(inf.premises.begin(), inf.premises.end());
    inf.premises.erase(std::unique(inf.premises.begin(), inf.premises.end()), inf.premises.end());
  }
  std::erase_if(inferences, [&](const GraphInference& i) { return hyp.count(i.derived) != 0; });
  std::sort(inferences.begin(), inferences.end(), [](const GraphInference& a, const GraphInference& b) {
    return std::tie(a.rule, a.premises, a.derived) < std::tie(b.rule, b.premises, b.derived);
  });
  inferences.erase(std::unique(inferences.begin(), inferences.end(),
                               [](const GraphInference& a, const GraphInference& b) {
                                 return std::tie(a.rule, a.premises, a.derived) ==
                                        std::tie(b.rule, b.premises, b.derived);
                               }),
                   inferences.end());

  HpdicGraph g;
  g.statement_count_ = statements.size();
  const std::size_t n = statements.size() + inferences.size();
  g.nodes_.reserve(n);
  g.in_.resize(n);
  g.out_.resize(n);

  bool have_conclusion = false;
  for (auto& f : statements) {
    HpdicNode node;
    node.id = g.nodes_.size();
    if (f.key() == conclusion) {
      node.cls = NodeClass::Conclusion;
      g.conclusion_ = node.id;
      have_conclusion = true;
    } else if (hyp.count(f.key()) != 0) {
      node.cls = NodeClass::Hypothesis;
    } else {
      node.cls = NodeClass::IntermediateResult;
    }
    g.by_key_.emplace(f.key(), node.id);
    node.fact = std::move(f);
    g.nodes_.push_back(std::move(node));
  }
  if (!have_conclusion) {
    throw ConclusionNotDerived("conclusion " + std::string(conclusion) + " was not derived");
  }
  if (hyp.count(conclusion) != 0) {
    throw InvalidProblem("conclusion " + std::string(conclusion) + " is a hypothesis");
  }

  auto statement_id = [&](const std::string& key) {
    auto it = g.by_key_.find(key);
    if (it == g.by_key_.end()) throw InputError("inference refers to unknown statement " + key);
    return it->second;
  };
  for (auto& inf : inferences) {
    HpdicNode node;
    node.id = g.nodes_.size();
    node.cls = NodeClass::Inference;
    node.rule = std::move(inf.rule);
    node.hint = std::move(inf.hint);
    for (const auto& p : inf.premises) {
      const NodeId pid = statement_id(p);
      g.in_[node.id].push_back(pid);
      g.out_[pid].push_back(node.id);
    }
    const NodeId did = statement_id(inf.derived);
    g.out_[node.id].push_back(did);
    g.in_[did].push_back(node.id);
    g.nodes_.push_back(std::move(node));
  }
  for (auto& v : g.in_) std::sort(v.begin(), v.end());
  for (auto& v : g.out_) std::sort(v.begin(), v.end());
  return g;
}

std::optional<NodeId> HpdicGraph::find_statement(std::string_view key) const {
  auto it = by_key_.find(std::string(key));
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<NodeId, NodeId>> HpdicGraph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (NodeId from = 0; from < out_.size(); ++from) {
    for (NodeId to : out_[from]) out.emplace_back(from, to);
  }
  return out;
}

std::size_t HpdicGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& v : out_) n += v.size();
  return n;
}

namespace {

// Justifications re-expressed over fact ids, minus those deriving a given fact.
struct RawGraph {
  std::vector<const Justification*> inferences;
  std::vector<std::vector<std::size_t>> parents;  // fact -> inference indexes
};

RawGraph collect(const DerivationRecord& record) {
  RawGraph raw;
  raw.parents.resize(record.facts().size());
  for (const auto& j : record.justifications()) {
    if (record.is_hypothesis(j.derived)) continue;
    raw.parents[j.derived].push_back(raw.inferences.size());
    raw.inferences.push_back(&j);
  }
  return raw;
}

// Alternates a forward pass (an inference survives only if every premise is
// derivable from surviving nodes) and a backward pass (a node survives only
// if the conclusion needs it) until nothing changes.
std::pair<std::vector<bool>, std::vector<bool>> prune(const DerivationRecord& record, const RawGraph& raw,
                                                      FactId conclusion) {
  const std::size_t nf = record.facts().size();
  const std::size_t ni = raw.inferences.size();
  std::vector<bool> keep_fact(nf, true);
  std::vector<bool> keep_inf(ni, true);

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<bool> reach(nf, false);
    std::vector<bool> live(ni, false);
    for (FactId f = 0; f < nf; ++f) reach[f] = keep_fact[f] && record.is_hypothesis(f);
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t i = 0; i < ni; ++i) {
        if (live[i] || !keep_inf[i]) continue;
        const auto& j = *raw.inferences[i];
        if (std::all_of(j.premises.begin(), j.premises.end(), [&](FactId p) { return reach[p]; })) {
          live[i] = true;
          if (!reach[j.derived] && keep_fact[j.derived]) {
            reach[j.derived] = true;
          }
          grew = true;
        }
      }
    }

    std::vector<bool> need(nf, false);
    std::vector<bool> used(ni, false);
    std::vector<FactId> stack;
    if (reach[conclusion]) {
      need[conclusion] = true;
      stack.push_back(conclusion);
    }
    while (!stack.empty()) {
      const FactId f = stack.back();
      stack.pop_back();
      for (std::size_t i : raw.parents[f]) {
        if (!live[i] || used[i]) continue;
        used[i] = true;
        for (FactId p : raw.inferences[i]->premises) {
          if (!need[p]) {
            need[p] = true;
            stack.push_back(p);
          }
        }
      }
    }
    if (need != keep_fact || used != keep_inf) {
      changed = true;
      keep_fact = std::move(need);
      keep_inf = std::move(used);
    }
  }
  return {keep_fact, keep_inf};
}

}  // namespace

HpdicGraph build_graph(const DerivationRecord& record, std::string_view conclusion_key,
                       const GraphOptions& options) {
  const auto conclusion = record.find(conclusion_key);
  if (!conclusion) {
    throw ConclusionNotDerived("conclusion " + std::string(conclusion_key) + " was not derived");
  }
  const RawGraph raw = collect(record);
  std::vector<bool> keep_fact(record.facts().size(), true);
  std::vector<bool> keep_inf(raw.inferences.size(), true);
  if (options.prune) std::tie(keep_fact, keep_inf) = prune(record, raw, *conclusion);

  std::vector<Fact> statements;
  std::vector<std::string> hypotheses;
  for (FactId f = 0; f < keep_fact.size(); ++f) {
    if (!keep_fact[f]) continue;
    statements.push_back(record.fact(f));
    if (record.is_hypothesis(f)) hypotheses.push_back(record.fact(f).key());
  }
  std::vector<GraphInference> inferences;
  for (std::size_t i = 0; i < keep_inf.size(); ++i) {
    if (!keep_inf[i]) continue;
    const auto& j = *raw.inferences[i];
    GraphInference gi{j.rule, j.hint, {}, record.fact(j.derived).key()};
    for (FactId p : j.premises) gi.premises.push_back(record.fact(p).key());
    inferences.push_back(std::move(gi));
  }
  return HpdicGraph::assemble(std::move(statements), hypotheses, std::move(inferences), conclusion_key);
}

HpdicGraph build_graph(const DerivationRecord& record, const Fact& conclusion,
                       const GraphOptions& options) {
  return build_graph(record, conclusion.key(), options);
}

namespace {

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string export_dot(const HpdicGraph& graph) {
  std::ostringstream out;
  out << "digraph hpdic {\n";
  out << "  rankdir=BT;\n";
  for (const auto& n : graph.nodes()) {
    out << "  n" << n.id << " [";
    switch (n.cls) {
      case NodeClass::Hypothesis:
        out << "shape=box, style=filled, fillcolor=\"#e8eef7\", label=\"" << dot_escape(n.fact->key()) << "\"";
        break;
      case NodeClass::IntermediateResult:
        out << "shape=box, label=\"" << dot_escape(n.fact->key()) << "\"";
        break;
      case NodeClass::Conclusion:
        out << "shape=box, peripheries=2, label=\"" << dot_escape(n.fact->key()) << "\"";
        break;
      case NodeClass::Inference:
        out << "shape=ellipse, label=\"" << dot_escape(n.rule) << "\"";
        break;
    }
    out << "];\n";
  }
  for (const auto& [from, to] : graph.edges()) out << "  n" << from << " -> n" << to << ";\n";
  out << "}\n";
  return out.str();
}

std::string export_json(const HpdicGraph& graph) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["schemaVersion"] = 1;
  doc["conclusion"] = graph.conclusion();
  doc["nodes"] = ordered_json::array();
  for (const auto& n : graph.nodes()) {
    ordered_json j;
    j["id"] = n.id;
    j["class"] = to_string(n.cls);
    if (n.is_statement()) {
      j["key"] = n.fact->key();
      j["predicate"] = n.fact->predicate();
      j["args"] = n.fact->args();
    } else {
      j["rule"] = n.rule;
      j["hint"] = n.hint;
    }
    doc["nodes"].push_back(std::move(j));
  }
  doc["edges"] = ordered_json::array();
  for (const auto& [from, to] : graph.edges()) doc["edges"].push_back({from, to});
  return doc.dump(2) + "\n";
}

std::string export_graph(const HpdicGraph& graph, GraphFormat format) {
  return format == GraphFormat::Dot ? export_dot(graph) : export_json(graph);
}

HpdicGraph import_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("graph JSON: ") + e.what());
  }
  try {
    if (doc.at("schemaVersion").get<int>() != 1) throw InputError("graph JSON: unsupported schemaVersion");
    const auto& nodes = doc.at("nodes");
    std::map<std::size_t, const nlohmann::json*> by_id;
    for (const auto& n : nodes) by_id[n.at("id").get<std::size_t>()] = &n;

    std::vector<Fact> statements;
    std::vector<std::string> hypotheses;
    std::string conclusion;
    std::map<std::size_t, GraphInference> inferences;
    std::map<std::size_t, std::string> keys;
    for (const auto& [id, n] : by_id) {
      const auto cls = parse_node_class(n->at("class").get<std::string>());
      if (!cls) throw InputError("graph JSON: unknown node class");
      if (*cls == NodeClass::Inference) {
        inferences[id] = GraphInference{n->at("rule").get<std::string>(), n->value("hint", ""), {}, {}};
        continue;
      }
      Fact f = Fact::from_canonical(n->at("predicate").get<std::string>(),
                                    n->at("args").get<std::vector<std::string>>());
      if (f.key() != n->at("key").get<std::string>()) throw InputError("graph JSON: key does not match atom");
      keys[id] = f.key();
      if (*cls == NodeClass::Hypothesis) hypotheses.push_back(f.key());
      if (*cls == NodeClass::Conclusion) conclusion = f.key();
      statements.push_back(std::move(f));
    }
    for (const auto& e : doc.at("edges")) {
      const auto from = e.at(0).get<std::size_t>();
      const auto to = e.at(1).get<std::size_t>();
      if (keys.count(from) && inferences.count(to)) {
        inferences[to].premises.push_back(keys[from]);
      } else if (inferences.count(from) && keys.count(to)) {
        if (!inferences[from].derived.empty()) throw InputError("graph JSON: inference with two conclusions");
        inferences[from].derived = keys[to];
      } else {
        throw InputError("graph JSON: edge is not statement/inference bipartite");
      }
    }
    std::vector<GraphInference> list;
    for (auto& [id, inf] : inferences) {
      if (inf.derived.empty()) throw InputError("graph JSON: inference without conclusion");
      list.push_back(std::move(inf));
    }
    return HpdicGraph::assemble(std::move(statements), hypotheses, std::move(list), conclusion);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("graph JSON: ") + e.what());
  }
}

}  // namespace geoproof
