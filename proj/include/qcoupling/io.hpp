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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcoupling/qstate.hpp"
#include "qcoupling/tripartite.hpp"

namespace qcoupling::io {

using Json = nlohmann::ordered_json;
using linalg::ComplexMatrix;
using qstate::DensityMatrix;
using qstate::Dims;

inline constexpr const char* kToolVersion = "0.1.0";

/// {"dims": [d1, ...], "matrix": [[[re, im], ...], ...]} with the product
/// of dims equal to the matrix side. Doubles are written in shortest
/// round-trip form, so write-then-read is exact.
struct MatrixFile {
  Dims dims;
  ComplexMatrix matrix;
};

Json to_json(const MatrixFile& file);
/// Throws InvalidInput naming the violated invariant.
MatrixFile matrix_file_from_json(const Json& j);

MatrixFile read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const MatrixFile& file);

/// Reads a matrix file and validates it as a density matrix.
DensityMatrix read_density(const std::filesystem::path& path, double tol = linalg::kDefaultTol);
void write_density(const std::filesystem::path& path, const DensityMatrix& rho);

/// {"table": [[p00, p01, ...], ...]}, a real joint probability table.
tripartite::ClassicalTable read_table(const std::filesystem::path& path);
Json to_json(const tripartite::ClassicalTripartite& t);

/// SHA-256 of the concatenated bytes of `paths`, hex encoded.
std::string digest_files(const std::vector<std::filesystem::path>& paths);

/// Machine-readable record of one CLI invocation. Contains no timestamps,
/// so identical inputs and seed give byte-identical output.
struct ReportFile {
  std::string command;
  std::string inputs_digest;
  Json results = Json::object();
  Json slacks = Json::object();
  Json verdicts = Json::object();
  std::uint64_t seed = 0;

  Json to_json() const;
};

Json criterion_json(const tripartite::CriterionReport& r);

}  // namespace qcoupling::io
