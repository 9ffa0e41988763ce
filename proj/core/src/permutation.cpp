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

#include "scribe/permutation.hpp"

#include <string>

#include "scribe/errors.hpp"

namespace scribe {

std::int64_t factorial(int m) {
  if (m < 0 || m > 20) throw InvalidArgument("factorial argument out of range");
  std::int64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

bool is_permutation_of_iota(std::span<const int> values) {
  std::vector<bool> seen(values.size(), false);
  for (int v : values) {
    if (v < 0 || v >= static_cast<int>(values.size()) || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

std::int64_t perm_rank(std::span<const int> permutation) {
  if (!is_permutation_of_iota(permutation)) {
    throw InvalidArgument("not a permutation of 0..M-1");
  }
  const int m = static_cast<int>(permutation.size());
  std::int64_t rank = 0;
  for (int i = 0; i < m; ++i) {
    int smaller_after = 0;
    for (int j = i + 1; j < m; ++j) {
      if (permutation[j] < permutation[i]) ++smaller_after;
    }
    rank += smaller_after * factorial(m - 1 - i);
  }
  return rank;
}

Permutation perm_unrank(int m, std::int64_t rank) {
  if (m < 1) throw InvalidArgument("permutation size must be positive");
  if (rank < 0 || rank >= factorial(m)) {
    throw InvalidArgument("rank " + std::to_string(rank) + " outside [0, " +
                          std::to_string(factorial(m)) + ")");
  }
  std::vector<int> pool(m);
  for (int i = 0; i < m; ++i) pool[i] = i;
  Permutation out;
  out.reserve(m);
  for (int i = m - 1; i >= 0; --i) {
    const std::int64_t f = factorial(i);
    const auto digit = static_cast<std::size_t>(rank / f);
    rank %= f;
    out.push_back(pool[digit]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
  }
  return out;
}

}  // namespace scribe
