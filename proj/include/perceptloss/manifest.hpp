// perceptloss/manifest.hpp

// Copyright 2026  Perceptloss Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "perceptloss/error.hpp"

namespace perceptloss {

struct PairEntry {
  std::string pair_id;
  std::string source_path;
  std::string converted_path;
};

namespace detail {

// Minimal CSV row splitter. Double-quoted cells may contain commas;
// "" inside quotes is an escaped quote.
inline std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

inline std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace detail

/// Parses a pair manifest: UTF-8 CSV with a header naming the columns
/// pair_id, source_path and converted_path (any order; extra columns are
/// ignored). Relative paths are resolved against the manifest's directory.
inline std::vector<PairEntry> parse_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::FileNotFound, "cannot open manifest " + path);

  std::string header_line;
  if (!std::getline(in, header_line))
    throw Error(ErrorKind::EmptyManifest, path + " is empty");
  const std::vector<std::string> header =
      detail::split_csv_row(detail::strip_cr(header_line));

  int id_col = -1, src_col = -1, cnv_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "pair_id") id_col = static_cast<int>(i);
    else if (header[i] == "source_path") src_col = static_cast<int>(i);
    else if (header[i] == "converted_path") cnv_col = static_cast<int>(i);
  }
  if (id_col < 0)
    throw Error(ErrorKind::MissingColumn, path + " header lacks pair_id");
  if (src_col < 0)
    throw Error(ErrorKind::MissingColumn, path + " header lacks source_path");
  if (cnv_col < 0)
    throw Error(ErrorKind::MissingColumn, path + " header lacks converted_path");

  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  auto resolve = [&base](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (base / fp).string();
  };

  std::vector<PairEntry> entries;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> cells = detail::split_csv_row(line);
    const std::size_t need = static_cast<std::size_t>(
        std::max(id_col, std::max(src_col, cnv_col)));
    if (cells.size() <= need) {
      std::ostringstream msg;
      msg << path << " row " << row << " has too few cells";
      throw Error(ErrorKind::MissingColumn, msg.str());
    }
    PairEntry e;
    e.pair_id = cells[static_cast<std::size_t>(id_col)];
    e.source_path = resolve(cells[static_cast<std::size_t>(src_col)]);
    e.converted_path = resolve(cells[static_cast<std::size_t>(cnv_col)]);
    if (!seen.insert(e.pair_id).second)
      throw Error(ErrorKind::DuplicatePairId, e.pair_id);
    entries.push_back(std::move(e));
  }
  if (entries.empty())
    throw Error(ErrorKind::EmptyManifest, path + " has no data rows");
  return entries;
}

}  // namespace perceptloss
