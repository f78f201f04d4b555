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

#include "fedlora/expcli/fixtures.h"

namespace fedlora::expcli {

const RatingTable& builtin_rating_table() {
  static const RatingTable table{
      {"Pro", "Hel", "Gui", "Emo", "Tru"},
      {"PsyDTCorpus", "SoulChatCorpus", "SMILECHAT", "CPsyCounD", "ExTES",
       "ESD-CoT", "AUGESC", "MindCorpus"},
      {
          {8.92, 8.90, 8.84, 8.86, 8.28},
          {8.09, 8.16, 8.14, 8.11, 7.78},
          {8.14, 8.23, 8.10, 8.36, 7.86},
          {8.60, 8.58, 8.62, 8.65, 8.03},
          {8.66, 8.76, 8.68, 8.86, 8.38},
          {8.40, 8.38, 8.26, 8.58, 8.14},
          {5.12, 4.98, 4.70, 6.64, 6.08},
          {8.94, 8.98, 8.96, 8.98, 8.32},
      },
      {
          {8.41, 8.65, 8.15, 9.12, 8.43},
          {8.41, 8.43, 7.95, 8.77, 7.97},
          {8.11, 8.15, 8.26, 8.57, 7.60},
          {8.17, 8.21, 8.13, 8.93, 8.33},
          {8.12, 8.36, 8.34, 8.87, 8.21},
          {7.44, 7.49, 7.21, 8.63, 7.43},
          {6.31, 6.85, 6.57, 7.27, 6.77},
          {8.45, 8.68, 8.35, 8.93, 8.50},
      }};
  return table;
}

}  // namespace fedlora::expcli
