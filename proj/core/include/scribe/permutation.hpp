///////////////////////////////////////////////////////////////////////
// (C) Copyright 2026, The Scribe Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
///////////////////////////////////////////////////////////////////////

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace scribe {

using Permutation = std::vector<int>;

std::int64_t factorial(int m);

// Lexicographic (Lehmer code) rank of a permutation of {0..M-1}.
// Throws InvalidArgument when the input is not a permutation.
std::int64_t perm_rank(std::span<const int> permutation);

// Inverse of perm_rank. Throws InvalidArgument when rank is outside [0, M!).
Permutation perm_unrank(int m, std::int64_t rank);

bool is_permutation_of_iota(std::span<const int> values);

}  // namespace scribe
