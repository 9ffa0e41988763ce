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

// Test-only reference implementations. Nothing here shares code with the
// library: the CTC value is obtained by enumerating every frame labelling.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace scribe::oracle {

// Softmax over each row of a frames x classes logit table.
inline std::vector<std::vector<double>> softmax_rows(
    const std::vector<std::vector<double>>& logits) {
  std::vector<std::vector<double>> out;
  for (const auto& row : logits) {
    double peak = row.front();
    for (double v : row) peak = std::max(peak, v);
    double total = 0.0;
    std::vector<double> p(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) {
      p[c] = std::exp(row[c] - peak);
      total += p[c];
    }
    for (double& v : p) v /= total;
    out.push_back(std::move(p));
  }
  return out;
}

// -log sum over all labellings pi with B(pi) == target of prod_t p[t][pi_t].
// Class 0 is the blank. Returns +inf when no labelling collapses to target.
inline double brute_force_ctc_nll(const std::vector<std::vector<double>>& probs,
                                  const std::vector<std::int64_t>& target) {
  const std::size_t frames = probs.size();
  const std::size_t classes = probs.front().size();
  std::vector<std::size_t> path(frames, 0);
  double total = 0.0;
  while (true) {
    // Collapse: drop repeats, then blanks.
    std::vector<std::int64_t> collapsed;
    std::int64_t prev = -1;
    for (auto c : path) {
      const auto cls = static_cast<std::int64_t>(c);
      if (cls != prev && cls != 0) collapsed.push_back(cls);
      prev = cls;
    }
    if (collapsed == target) {
      double p = 1.0;
      for (std::size_t t = 0; t < frames; ++t) p *= probs[t][path[t]];
      total += p;
    }
    std::size_t t = 0;
    while (t < frames && ++path[t] == classes) path[t++] = 0;
    if (t == frames) break;
  }
  return total > 0.0 ? -std::log(total) : std::numeric_limits<double>::infinity();
}

// Central difference of f with respect to one scalar it reads through `x`.
inline double central_difference(const std::function<double()>& f, double& x, double h) {
  const double saved = x;
  x = saved + h;
  const double up = f();
  x = saved - h;
  const double down = f();
  x = saved;
  return (up - down) / (2.0 * h);
}

inline double relative_error(double a, double b, double floor = 1e-8) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace scribe::oracle
