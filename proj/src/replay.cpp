#include "geoproof/replay.hpp"

#include <charconv>
#include <iomanip>
#include <optional>
#include <sstream>
#include <vector>

#include "geoproof/errors.hpp"

namespace geoproof {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_words(std::string_view s, std::size_t max_parts) {
  std::vector<std::string_view> out;
  s = trim(s);
  while (!s.empty()) {
    if (out.size() + 1 == max_parts) {
      out.push_back(trim(s));
      break;
    }
    const auto space = s.find_first_of(" \t");
    out.push_back(s.substr(0, space));
    if (space == std::string_view::npos) break;
    s = trim(s.substr(space));
  }
  return out;
}

std::string format_number(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

enum class Op { Eq, Ne, Lt, Le, Gt, Ge };

std::optional<Op> parse_op(std::string_view s) {
  if (s == "==") return Op::Eq;
  if (s == "!=") return Op::Ne;
  if (s == "<") return Op::Lt;
  if (s == "<=") return Op::Le;
  if (s == ">") return Op::Gt;
  if (s == ">=") return Op::Ge;
  return std::nullopt;
}

template <typename T>
bool compare(const T& actual, Op op, const T& expected) {
  switch (op) {
    case Op::Eq:
      return actual == expected;
    case Op::Ne:
      return actual != expected;
    case Op::Lt:
      return actual < expected;
    case Op::Le:
      return actual <= expected;
    case Op::Gt:
      return actual > expected;
    case Op::Ge:
      return actual >= expected;
  }
  return false;
}

// Numbers in scripts are compared at 1e-9 absolute tolerance so that written
// decimals such as 0.25 match the ratios computed from counts.
bool compare_number(double actual, Op op, double expected) {
  constexpr double eps = 1e-9;
  const bool eq = actual > expected - eps && actual < expected + eps;
  switch (op) {
    case Op::Eq:
      return eq;
    case Op::Ne:
      return !eq;
    case Op::Lt:
      return actual < expected && !eq;
    case Op::Le:
      return actual < expected || eq;
    case Op::Gt:
      return actual > expected && !eq;
    case Op::Ge:
      return actual > expected || eq;
  }
  return false;
}

std::optional<double> parse_number(std::string_view s) {
  // strtod on a bounded copy; from_chars for double is not available everywhere.
  std::string copy(s);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size()) return std::nullopt;
  return v;
}

struct LastEvents {
  std::optional<std::string> submit;
  std::optional<std::string> hint;
  std::optional<std::string> target;
};

}  // namespace

ReplayReport replay_script(Session& session, std::string_view script) {
  ReplayReport report;
  std::ostringstream out;
  LastEvents last;
  const auto& graph = session.context().graph;

  int line_no = 0;
  std::size_t start = 0;
  while (start <= script.size()) {
    auto end = script.find('\n', start);
    if (end == std::string_view::npos) end = script.size();
    const std::string_view line = trim(script.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const auto words = split_words(line, 2);
    const std::string_view verb = words[0];
    if (verb == "SUBMIT") {
      if (words.size() < 2) throw SyntaxError(line_no, 1, "SUBMIT needs a statement");
      try {
        const SubmitResult r = session.submit_statement(words[1]);
        last.submit = std::string(to_string(r.outcome));
      } catch (const MalformedStatement&) {
        last.submit = std::string(to_string(SubmitOutcome::Malformed));
      }
      out << line_no << ": SUBMIT " << words[1] << " -> " << *last.submit << "\n";
    } else if (verb == "HINT") {
      if (words.size() != 1) throw SyntaxError(line_no, 6, "HINT takes no argument");
      try {
        const Hint h = session.next_hint();
        last.hint = std::string(to_string(h.kind));
        last.target = h.target ? std::optional(graph.node(*h.target).fact->key()) : std::nullopt;
        out << line_no << ": HINT -> " << *last.hint;
        if (last.target) out << " [" << *last.target << "]";
        out << " \"" << h.message << "\"\n";
      } catch (const NothingMissing&) {
        last.hint = "nothingMissing";
        last.target.reset();
        out << line_no << ": HINT -> nothingMissing\n";
      }
    } else if (verb == "EXPECT") {
      const auto parts = words.size() == 2 ? split_words(words[1], 3) : std::vector<std::string_view>{};
      if (parts.size() != 3) throw SyntaxError(line_no, 8, "EXPECT needs <key> <op> <value>");
      const std::string_view key = parts[0];
      const auto op = parse_op(parts[1]);
      if (!op) throw SyntaxError(line_no, 8, "unknown operator '" + std::string(parts[1]) + "'");
      const std::string_view value = parts[2];

      bool ok = false;
      std::string actual;
      auto numeric = [&](double v) {
        const auto expected = parse_number(value);
        if (!expected) throw SyntaxError(line_no, 8, "'" + std::string(key) + "' expects a number");
        actual = format_number(v);
        ok = compare_number(v, *op, *expected);
      };
      auto textual = [&](const std::optional<std::string>& v) {
        if (*op != Op::Eq && *op != Op::Ne) {
          throw SyntaxError(line_no, 8, "'" + std::string(key) + "' only supports == and !=");
        }
        actual = v.value_or("none");
        ok = compare(actual, *op, std::string(value));
      };

      if (key == "last") {
        textual(last.submit);
      } else if (key == "hint") {
        textual(last.hint);
      } else if (key == "target") {
        // Compare canonical forms so scripts may write either argument order.
        std::string expected(value);
        try {
          expected = resolve_fact(parse_raw_fact(value), session.context().rules,
                                  session.context().problem.objects)
                         .key();
        } catch (const InputError&) {
        }
        if (*op != Op::Eq && *op != Op::Ne) throw SyntaxError(line_no, 8, "'target' only supports == and !=");
        actual = last.target.value_or("none");
        ok = compare(actual, *op, expected);
      } else if (key == "completion") {
        numeric(session.best_proof().completion);
      } else if (key == "checked") {
        std::size_t n = 0;
        for (NodeId id : session.checked_nodes()) {
          if (graph.node(id).cls != NodeClass::Hypothesis) ++n;
        }
        numeric(static_cast<double>(n));
      } else if (key == "best") {
        numeric(static_cast<double>(session.best_proof().proof_index));
      } else if (key == "blanks") {
        numeric(static_cast<double>(session.redaction_view().blanks()));
      } else if (key == "rejected") {
        numeric(static_cast<double>(session.rejected().size()));
      } else if (key == "unlocked") {
        if (value != "true" && value != "false") throw SyntaxError(line_no, 8, "'unlocked' expects true or false");
        textual(std::string(session.redaction_view().unlocked ? "true" : "false"));
      } else {
        throw SyntaxError(line_no, 8, "unknown EXPECT key '" + std::string(key) + "'");
      }
      ++report.expectations;
      if (!ok) ++report.failures;
      out << line_no << ": EXPECT " << key << " " << parts[1] << " " << value << " -> "
          << (ok ? "ok" : "FAILED") << " (actual " << actual << ")\n";
    } else {
      throw SyntaxError(line_no, 1, "unknown command '" + std::string(verb) + "'");
    }
  }
  out << "replay: " << report.expectations << " expectations, " << report.failures << " failed\n";
  report.transcript = out.str();
  return report;
}

}  // namespace geoproof
