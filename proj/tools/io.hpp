#pragma once

// JSON file formats and reports of the command line tool.
//
// Algebra file
//   {"step": 2, "layer_dims": [2, 1],
//    "brackets": [{"left": "b_1", "right": "b_2", "result": {"b_3": "1"}}],
//    "gram_minus1": [["1", "0"], ["0", "1"]], "labels": ["A1", "A2", "B"]}
// Basis elements are b_1..b_n (1-based, layer by layer); labels are optional.
// Only brackets that are nonzero need to be listed, one orientation suffices.
//
// Frame file
//   {"dim": 3, "fields": [["1", "0", "-1/2*x2"], ["0", "1", "1/2*x1"]],
//    "point": ["0", "0", "0"], "symbol": "../algebras/heisenberg23.json"}
// "symbol" is a path relative to the frame file or an inline algebra object.
// Optional keys: "degree" (Taylor degree cap, default 6) and "oracle"
// (heis23 | rolling235 | free_step2 | contact_std).
//
// Kappa file
//   {"coeffs": ["0", "1/2", ...]} over the flat basis of C^2 (see cochain.hpp).
//
// All numbers except dimensions are rational strings.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "canonconn/carnot.hpp"
#include "canonconn/cochain.hpp"
#include "canonconn/frames.hpp"
#include "canonconn/normalize.hpp"

namespace canonconn::io {

using json = nlohmann::ordered_json;

CarnotSpec algebra_from_json(const json& doc);
json algebra_to_json(const CarnotSpec& spec);

struct FrameFile {
  FrameModel model;
  CarnotSpec symbol;
  std::string symbol_path;  // empty when the symbol was inline
  unsigned degree = 6;
  std::string oracle;       // empty when absent
};

FrameFile frame_from_json(const json& doc, const std::filesystem::path& base_dir);
/// The symbol is written back as the original path, or inline when there was none.
json frame_to_json(const FrameFile& frame);

Cochain kappa_from_json(const json& doc, const Complex& cx);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string read_file(const std::filesystem::path& path);
/// Parses JSON, turning syntax errors into Error(Parse) with the byte offset.
json parse_json(std::string_view text, const std::string& what);

json rat_vec(const Vec& v);
json rat_mat(const Mat& m);
json certificate_json(const Certificate& cert);

/// Residual of the degree-1 system for an input it cannot solve.
Vec normalization_residual(const Normalizer& nz, const Cochain& kappa_tilde);

struct Outcome {
  json report;
  int exit_code = 0;  // 0 ok, 1 validation or parse failure, 2 inconsistent system
};

Outcome cmd_check(const std::filesystem::path& algebra);
Outcome cmd_complex(const std::filesystem::path& algebra, std::size_t k);
Outcome cmd_normalize(const std::filesystem::path& algebra, const std::filesystem::path& kappa);
Outcome cmd_frame(const std::filesystem::path& frame);

/// Two-space indented JSON with a trailing newline.
std::string serialize(const json& report);

}  // namespace canonconn::io
