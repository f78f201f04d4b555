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

#ifndef FEDLORA_EXPCLI_FIXTURES_H_
#define FEDLORA_EXPCLI_FIXTURES_H_

#include <string>
#include <vector>

namespace fedlora::expcli {

// Paired automatic and human ratings of several dialogue datasets on the
// same rating dimensions. scores[i][d] is dataset i, dimension d.
struct RatingTable {
  std::vector<std::string> dimensions;
  std::vector<std::string> datasets;
  std::vector<std::vector<double>> automatic;
  std::vector<std::vector<double>> human;
};

// Ratings of eight emotional-support dialogue corpora on professionalism,
// helpfulness, guidance, emotional support and trustworthiness.
const RatingTable& builtin_rating_table();

}  // namespace fedlora::expcli

#endif  // FEDLORA_EXPCLI_FIXTURES_H_
