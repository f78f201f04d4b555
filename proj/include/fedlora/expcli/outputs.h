// Copyright 2026 The FedLoRA Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDLORA_EXPCLI_OUTPUTS_H_
#define FEDLORA_EXPCLI_OUTPUTS_H_

#include <filesystem>
#include <string>
#include <vector>

namespace fedlora::expcli {

// Creates parent directories. Throws IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

// Comma-joined fields plus '\n'. Fields must not contain commas, quotes or
// newlines; every writer in this module emits only numbers and identifiers.
std::string csv_line(const std::vector<std::string>& fields);

// Splits one CSV line on commas, trimming surrounding spaces and a trailing
// '\r'. Quoted fields are not supported.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace fedlora::expcli

#endif  // FEDLORA_EXPCLI_OUTPUTS_H_
