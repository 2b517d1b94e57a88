#pragma once

#include <filesystem>
#include <string>

#include "io.hpp"

namespace testing_util {

inline std::filesystem::path data_path(const std::string& rel) {
  return std::filesystem::path(CANONCONN_DATA_DIR) / rel;
}

inline std::filesystem::path oracle_path(const std::string& rel) {
  return std::filesystem::path(CANONCONN_ORACLE_DIR) / rel;
}

inline canonconn::io::json load_json(const std::filesystem::path& p) {
  return canonconn::io::parse_json(canonconn::io::read_file(p), p.filename().string());
}

/// data/frames/<name>.json
inline canonconn::io::FrameFile load_frame(const std::string& name) {
  auto p = data_path("frames/" + name + ".json");
  return canonconn::io::frame_from_json(load_json(p), p.parent_path());
}

/// data/algebras/<name>.json
inline canonconn::CarnotSpec load_algebra(const std::string& name) {
  return canonconn::io::algebra_from_json(load_json(data_path("algebras/" + name + ".json")));
}

inline canonconn::Vec rat_vec(const canonconn::io::json& arr) {
  canonconn::Vec v;
  for (const auto& s : arr) v.push_back(canonconn::parse_rat(s.get<std::string>()));
  return v;
}

}  // namespace testing_util
