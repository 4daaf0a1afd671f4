// Copyright 2026 The Boxgen Authors. All Rights Reserved.
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

#include "boxgen/training/loss_log.h"

#include <filesystem>
#include <sstream>

#include <fmt/format.h>

#include "boxgen/base/error.h"

namespace boxgen {
namespace {

std::string Cell(const std::optional<double>& v) {
  return v ? fmt::format("{:.9g}", *v) : std::string();
}

std::optional<double> ParseCell(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  try {
    return std::stod(cell);
  } catch (const std::exception&) {
    Fail(ErrorCode::kInvalidArgument, "bad loss log cell '{}'", cell);
  }
}

}  // namespace

std::string FormatLossRecord(const LossRecord& r) {
  return fmt::format("{},{},{},{},{},{}", r.step, Cell(r.shape_l1), Cell(r.color_ce),
                     Cell(r.refine_l1), Cell(r.disc_loss), Cell(r.gen_adv));
}

LossRecord ParseLossRecord(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  if (cells.size() != 6) {
    Fail(ErrorCode::kInvalidArgument, "loss log row has {} cells, expected 6", cells.size());
  }
  LossRecord r;
  r.step = std::stol(cells[0]);
  r.shape_l1 = ParseCell(cells[1]);
  r.color_ce = ParseCell(cells[2]);
  r.refine_l1 = ParseCell(cells[3]);
  r.disc_loss = ParseCell(cells[4]);
  r.gen_adv = ParseCell(cells[5]);
  return r;
}

LossLog::LossLog(const std::string& path) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) ||
                     std::filesystem::file_size(path, ec) == 0;
  out_.open(path, std::ios::app);
  if (!out_) Fail(ErrorCode::kDataLoss, "cannot open loss log {}", path);
  if (fresh) out_ << kLossLogHeader << '\n';
}

void LossLog::Append(const LossRecord& record) {
  out_ << FormatLossRecord(record) << '\n';
  out_.flush();
}

std::vector<LossRecord> ReadLossLog(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kNotFound, "loss log not found: {}", path);
  std::vector<LossRecord> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (!line.empty()) out.push_back(ParseLossRecord(line));
  }
  return out;
}

}  // namespace boxgen
