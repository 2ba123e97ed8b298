// Copyright 2026 The niqzk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NIQZK_REPORT_HPP
#define NIQZK_REPORT_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace niqzk {

// Ordered key=value run report. Same inputs and seed give byte-identical
// output: floats print with 12 significant digits and nothing time- or
// host-dependent is ever added (wall time goes to stderr, not the report).
class RunReport {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, const char* value);
  void add(const std::string& key, double value);
  void add(const std::string& key, int value);
  void add(const std::string& key, std::uint64_t value);

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  std::string render() const;
  std::string render_json() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string format_significant(double value);

// FNV-1a over the file bytes, as 16 hex digits.
std::string file_digest(const std::string& path);

}  // namespace niqzk

#endif
