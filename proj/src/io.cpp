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

#include "qcoupling/io.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <memory>
#include <numeric>
#include <sstream>

namespace qcoupling::io {

using linalg::Complex;

namespace {

[[noreturn]] void bad_input(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

Json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad_input("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad_input(path.string() + ": malformed JSON (" + e.what() + ")");
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) bad_input("cannot write " + path.string());
  out << text << '\n';
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) bad_input(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

Json to_json(const MatrixFile& file) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < file.matrix.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < file.matrix.cols(); ++j) {
      const Complex z = file.matrix(i, j);
      row.push_back(Json::array({z.real(), z.imag()}));
    }
    rows.push_back(std::move(row));
  }
  return Json{{"dims", file.dims}, {"matrix", std::move(rows)}};
}

MatrixFile matrix_file_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dims") || !j.contains("matrix")) {
    bad_input("matrix file needs \"dims\" and \"matrix\" fields");
  }
  const Json& dims = j.at("dims");
  const Json& rows = j.at("matrix");
  if (!dims.is_array() || dims.empty()) bad_input("dims must be a nonempty array");
  MatrixFile out;
  for (const auto& d : dims) {
    if (!d.is_number_unsigned() || d.get<std::size_t>() == 0) bad_input("dims must be positive integers");
    out.dims.push_back(d.get<std::size_t>());
  }
  const std::size_t n = std::accumulate(out.dims.begin(), out.dims.end(), std::size_t{1}, std::multiplies<>());
  if (!rows.is_array() || rows.size() != n) bad_input("product of dims does not equal the matrix side");
  std::vector<Complex> entries;
  entries.reserve(n * n);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n) bad_input("matrix must be square with side " + std::to_string(n));
    for (const auto& z : row) {
      if (!z.is_array() || z.size() != 2) bad_input("entries must be [re, im] pairs");
      entries.emplace_back(number(z[0], "re"), number(z[1], "im"));
    }
  }
  out.matrix = ComplexMatrix(n, n, std::move(entries));
  return out;
}

MatrixFile read_matrix_file(const std::filesystem::path& path) {
  try {
    return matrix_file_from_json(parse_file(path));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InvalidInput) throw;
    bad_input(path.string() + ": " + e.what());
  }
}

void write_matrix_file(const std::filesystem::path& path, const MatrixFile& file) {
  write_text(path, to_json(file).dump(1));
}

DensityMatrix read_density(const std::filesystem::path& path, double tol) {
  MatrixFile file = read_matrix_file(path);
  return DensityMatrix(std::move(file.matrix), std::move(file.dims), tol);
}

void write_density(const std::filesystem::path& path, const DensityMatrix& rho) {
  write_matrix_file(path, MatrixFile{rho.dims(), rho.mat()});
}

tripartite::ClassicalTable read_table(const std::filesystem::path& path) {
  const Json j = parse_file(path);
  if (!j.is_object() || !j.contains("table") || !j.at("table").is_array() || j.at("table").empty()) {
    bad_input(path.string() + ": table file needs a nonempty \"table\" array");
  }
  tripartite::ClassicalTable t;
  t.rows = j.at("table").size();
  for (const auto& row : j.at("table")) {
    if (!row.is_array() || row.empty() || (t.cols != 0 && row.size() != t.cols)) {
      bad_input(path.string() + ": table rows must be nonempty and of equal length");
    }
    t.cols = row.size();
    for (const auto& v : row) t.values.push_back(number(v, "table entry"));
  }
  return t;
}

Json to_json(const tripartite::ClassicalTripartite& t) {
  Json out = Json::array();
  for (std::size_t x = 0; x < t.dim_a; ++x) {
    Json slab = Json::array();
    for (std::size_t y = 0; y < t.dim_b; ++y) {
      Json row = Json::array();
      for (std::size_t z = 0; z < t.dim_c; ++z) row.push_back(t(x, y, z));
      slab.push_back(std::move(row));
    }
    out.push_back(std::move(slab));
  }
  return Json{{"dims", {t.dim_a, t.dim_b, t.dim_c}}, {"table", std::move(out)}};
}

std::string digest_files(const std::vector<std::filesystem::path>& paths) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::NumericalFailure, "SHA-256 unavailable");
  }
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) bad_input("cannot open " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size());
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int{md[i]};
  return hex.str();
}

Json ReportFile::to_json() const {
  return Json{{"command", command}, {"inputs_digest", inputs_digest}, {"results", results},
              {"slacks", slacks},   {"verdicts", verdicts},           {"seed", seed},
              {"tool_version", kToolVersion}};
}

Json criterion_json(const tripartite::CriterionReport& r) {
  Json j{{"name", r.name},
         {"lhs", r.lhs},
         {"rhs", r.rhs},
         {"slack", r.slack},
         {"tol", r.tol},
         {"verdict", std::string(tripartite::to_string(r.verdict))}};
  if (!r.note.empty()) j["note"] = r.note;
  if (r.witness) {
    Json kraus = Json::array();
    for (const auto& k : r.witness->kraus()) kraus.push_back(to_json(MatrixFile{{k.rows()}, k})["matrix"]);
    j["witness"] = std::move(kraus);
  }
  return j;
}

}  // namespace qcoupling::io
