#pragma once

// Verification checks shared by the command-line `verify` command and the
// acceptance test binary. Each check measures one number and compares it with
// a fixed tolerance window; nothing here decides what is "expected" to fail.

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsf/mode_dynamics.hpp"

namespace dsf::checks {

enum class Suite { Ode, Special, Signature, Boundary, Hadamard };

std::string to_string(Suite s);
/// Parses "ode", "special", "signature", "boundary", "hadamard" or "all".
/// Throws PreconditionError on anything else.
std::vector<Suite> parse_suites(const std::string& name);
std::vector<Suite> all_suites();

enum class Comparison {
    Below,   // measured < upper
    AtMost,  // measured <= upper
    Within,  // lower <= measured <= upper
};

std::string to_string(Comparison c);

struct Check {
    std::string name;
    Suite suite = Suite::Ode;
    std::string criterion;  // acceptance criterion label such as "AC1", empty for invariants
    std::string description;
    Comparison comparison = Comparison::Below;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    double measured = std::numeric_limits<double>::quiet_NaN();
    bool passed = false;
    std::string error;  // set when the computation itself threw
    std::vector<std::pair<std::string, double>> info;
    double wall_clock_s = 0.0;
};

struct VerifyOptions {
    int threads = 0;  // 0: one worker per logical core
    Tolerances integration{1e-10, 1e-12};
};

std::vector<Check> run_suite(Suite suite, const VerifyOptions& options = {});
std::vector<Check> run_suites(const std::vector<Suite>& suites, const VerifyOptions& options = {});

/// The closed-slicing mode grid of the signature acceptance criterion:
/// m in {0.25, 0.5, 1, 2, 4} and lambda in {+-3/2, +-5/2, +-7/2, +-11/2}.
std::vector<ModeParams> acceptance_grid();

}  // namespace dsf::checks
