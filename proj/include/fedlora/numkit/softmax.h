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

#ifndef FEDLORA_NUMKIT_SOFTMAX_H_
#define FEDLORA_NUMKIT_SOFTMAX_H_

#include <span>
#include <vector>

namespace fedlora::numkit {

// Max-subtracted softmax. Entries of `logits` must be finite.
std::vector<double> softmax(std::span<const double> logits);

// log(softmax(logits)) computed as (x - max) - log(sum(exp(x - max))), which
// stays finite even when some probabilities underflow to zero.
std::vector<double> log_softmax(std::span<const double> logits);

}  // namespace fedlora::numkit

#endif  // FEDLORA_NUMKIT_SOFTMAX_H_
