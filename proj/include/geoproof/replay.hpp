#pragma once

// Session scripts (.qs): one event per line.
//
//   SUBMIT <fact>            e.g. SUBMIT onBisector(X,sAB)
//   HINT
//   EXPECT <key> <op> <value>
//
// EXPECT keys: last (outcome of the latest SUBMIT: matched | notOnGraph |
// malformed), hint (kind of the latest HINT: nudge | redirect |
// teacherReferral | nothingMissing), target (fact targeted by the latest
// HINT), completion, checked (non-hypothesis statements checked), best
// (followed proof index), unlocked (true | false), blanks (redaction
// blanks), rejected (statements not on the graph). Operators: == != < <=
// > >=. Blank lines and lines starting with '#' are ignored.

#include <cstddef>
#include <string>
#include <string_view>

#include "geoproof/tutor.hpp"

namespace geoproof {

struct ReplayReport {
  std::size_t expectations = 0;
  std::size_t failures = 0;
  std::string transcript;  // one line per script event

  bool ok() const { return failures == 0; }
};

// Runs the script against the session. Throws SyntaxError on a malformed
// script line; failed expectations are reported, not thrown.
ReplayReport replay_script(Session& session, std::string_view script);

}  // namespace geoproof
