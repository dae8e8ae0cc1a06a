#pragma once

#include "bfree/specfile.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace bfree {

// Reports are assembled as insertion-ordered JSON so that identical inputs
// produce byte-identical dumps; the text and CSV renderers are projections
// of the same tree.
using Json = nlohmann::ordered_json;

enum class ReportFormat { text, json, csv };

std::string format_name(ReportFormat f);

// Budgets for one analysis run.  Every verdict the run emits is qualified by
// these numbers; raising them never turns a reported violation into a pass,
// it only extends the searched ranges.
struct RunConfig {
    std::string spec_path;      // recorded in the report header
    long n_max = 4;             // deepest filtration level analyzed
    long k_max = 10;            // shift range searched by the separation conditions
    long N_max = 3;             // base levels tried by the essential-hole conditions
    long depth = 2;             // chain depth for the arithmetic essential holes
    long long beta_budget = 200'000;  // per-level state evaluations in the double condition
    long L = 2'000;             // half-width of block-counting windows (complexity verb)
    long probe_horizon = 0;     // generator indices inspected during classification; 0 = automatic
    long stab_threshold = 3;    // sources required before an infinite-source tag
    bool extended = false;      // use the extended filtration (two_filtrations family)
    bool oracle_audit = false;  // re-derive small levels from the definitions and compare
    ReportFormat format = ReportFormat::text;
};

// Global level cap from the BFREE_LEVEL_CAP environment variable; 0 = unset.
long env_level_cap();

// Enforces positive budgets and the level cap; throws std::invalid_argument
// with a message naming the offending field and the accepted range.
void validate_config(const RunConfig& config);

struct ReportBundle {
    Json json;
    // 0 = every checked condition holds up to its budget, 2 = some condition
    // is violated (witnesses included), 3 = some search was inconclusive or
    // budget-truncated without a violation.
    int exit_code = 0;
};

// Full analysis of a loaded spec: per-level invariants (S_n, lcm, classified
// gcd values, holes, essential holes by both constructions with an agreement
// flag, minimal periods with their certification route), condition verdicts
// with replayed witnesses, totient sums, boundary-measure bounds, and the
// centralizer conclusion.  Direct Toeplitz specs get the level/period/
// condition part; the divisibility-structure sections are marked not
// applicable.  Throws std::invalid_argument for config errors and propagates
// computation errors (both map to exit code 4 at the CLI boundary).
ReportBundle analyze(const LoadedSpec& spec, const RunConfig& config);

// Renderers.  JSON is the dump of the bundle's tree (4-space indent, one
// trailing newline); text is a sectioned human-readable report; CSV emits
// one header-rowed table per section, blank-line separated.
std::string render(const ReportBundle& bundle, ReportFormat format);
std::string render_text(const Json& report);
std::string render_csv(const Json& report);

// The bundled regression suite: each name loads specs/<name>.toml and checks
// the closed forms that spec is shipped to demonstrate.
std::vector<std::string> example_names();

struct ExampleResult {
    std::string name;
    bool passed = false;
    std::vector<std::string> checks;    // one line per verified fact
    std::vector<std::string> failures;  // non-empty exactly when !passed
};

ExampleResult run_example(const std::string& name);

}  // namespace bfree
