#pragma once

#include "pnrp2/presentation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pnrp2 {

// One oriented rewrite u -> v with u, v freely reduced, u nonempty and
// u = v in the group.  The rule set built from a presentation is closed
// under swapping sides, so the induced rewrite relation is symmetric.
struct RewriteRule {
    int id = 0;
    Word lhs, rhs;
    std::string source; // relator id this rule was cut from
};

// All rules obtained from every cyclic rotation of every relator and its
// inverse, split at every position into prefix -> inverse-of-suffix.
// Deduplicated, deterministic ids.
std::vector<RewriteRule> rules_from_presentation(const Presentation& p);

// Applies rule r at unit position pos (0-based in the expanded word);
// returns the freely reduced result, or nullopt if the lhs does not
// match there.
std::optional<Word> apply_rule(const Word& w, const RewriteRule& r, std::size_t pos);

struct TraceStep {
    int rule_id = 0;
    std::size_t pos = 0;
    Word result; // freely reduced word after the step
};

// Replayable rewrite chain: applying the steps from start yields end.
struct ProofTrace {
    Word start;
    std::vector<TraceStep> steps;
    Word end;
};

// Re-applies every step and checks each intermediate and the end word.
bool replay(const ProofTrace& t, const std::vector<RewriteRule>& rules);

enum class ProveStatus {
    Proved,        // meet found; traces are valid
    Exhausted,     // full search space explored, provably no path survives
    ResourceLimit, // depth or frontier budget hit first
};

struct ProveOptions {
    int max_depth = 10;            // total rule applications across both sides
    std::size_t max_frontier = 200000; // per-level width cap
    int threads = 0;               // 0 = library default, 1 = serial reference
};

struct ProveOutcome {
    ProveStatus status = ProveStatus::ResourceLimit;
    Word meet;            // common word both sides reached (when proved)
    ProofTrace from_lhs;  // lhs ->* meet
    ProofTrace from_rhs;  // rhs ->* meet (empty steps when rhs == meet)
    std::size_t expanded = 0; // words expanded, diagnostics
};

// Bidirectional breadth-first search between lhs and rhs under the rule
// set.  Deterministic: frontiers are kept in shortlex order, successor
// generation follows (rule id, position), and the reported meet is the
// shortlex-least one of the earliest level.  The same outcome is
// produced for any thread count.
ProveOutcome prove_identity(const Word& lhs, const Word& rhs,
                            const std::vector<RewriteRule>& rules,
                            const ProveOptions& opt = {});

// Text form:
//   start: <word>
//   apply <rule-id> at <pos>: <word>     (per lhs-side step)
//   meet: <word>
//   from: <word>
//   apply <rule-id> at <pos>: <word>     (per rhs-side step)
std::string export_trace(const ProveOutcome& o);

} // namespace pnrp2
