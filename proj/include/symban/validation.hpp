#pragma once

#include <string>
#include <vector>

#include "symban/harness.hpp"

namespace symban {

enum class ValidationSuite { Counts, Rip, Selection, Lemma1, RegretSlope };

const char* to_string(ValidationSuite s);
ValidationSuite validation_suite_from_string(std::string_view name);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // measured statistics
};

struct ValidationReport {
    std::string title;
    std::vector<CheckResult> checks;
    bool all_pass() const;
};

// The numbered acceptance checks (1..10). Thresholds and instance sizes
// are pinned inside; each returns one or more measured pass/fail lines.
ValidationReport run_criterion(int index);

// Named validation suites exposed on the CLI; each maps onto a subset of
// the numbered checks (counts: 1, rip: 3, selection: 4 and 6, lemma1: 5,
// regret_slope: 7).
ValidationReport validate(ValidationSuite suite);

}  // namespace symban
