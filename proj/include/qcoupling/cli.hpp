// Copyright 2026 The qcoupling Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qcoupling/qstate.hpp"

namespace qcoupling::cli {

/// Exit codes: computed with no violation, criterion violated, input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitError = 2;

/// Named states produced by example-gen; the name is the file stem.
using ExampleSet = std::vector<std::pair<std::string, qstate::DensityMatrix>>;

/// ex4 / ex5 (parameter mu in [0, 1]): the joint pure state and both
/// marginals. ex6 (parameter x in [0, 1]): the diagonal pair
/// diag((1 +/- x)/2, (1 -/+ x)/2). singlet-triple: singlet on AB with
/// |00> on AC and |11> on BC. Throws ParamOutOfRange.
ExampleSet example_states(const std::string& name, double param);

/// Runs one command line (without the program name). The JSON report goes
/// to `out` and, with --out, to a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qcoupling::cli
