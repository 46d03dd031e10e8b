// Copyright 2026 The Gravcat Authors
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

#ifndef GRAVCAT_IO_H
#define GRAVCAT_IO_H

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace gravcat::io {

/// Decimal with 17 significant digits, independent of the locale.
std::string format_double(double v);

/// CSV writer with a fixed header; rows are written as they arrive.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void row(const std::vector<double>& values);
    void row_text(const std::vector<std::string>& values);
    void close();
    std::size_t rows() const { return rows_; }

  private:
    std::ofstream out_;
    std::size_t columns_;
    std::size_t rows_ = 0;
};

/// Writes `<csv_path>.json` describing the CSV next to it.
void write_sidecar(const std::string& csv_path, const nlohmann::json& meta);

void write_json(const std::string& path, const nlohmann::json& doc);

/// Lowercase hex SHA-256 of the file contents.
std::string sha256_file(const std::string& path);

}  // namespace gravcat::io

#endif  // GRAVCAT_IO_H
