// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sltkit/edit_distance.h"

#include <algorithm>
#include <limits>

#include "sltkit/errors.h"

namespace slt {

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 4;

// row[b - a] = edit_distance(hyp[a, b), ref) for b = a .. |hyp|.
std::vector<std::size_t> distances_from(std::span<const std::string> hyp, std::size_t a,
                                        std::span<const std::string> ref) {
  const std::size_t m = ref.size();
  std::vector<std::size_t> col(m + 1);
  for (std::size_t j = 0; j <= m; ++j) col[j] = j;
  std::vector<std::size_t> out;
  out.reserve(hyp.size() - a + 1);
  out.push_back(col[m]);
  for (std::size_t b = a; b < hyp.size(); ++b) {
    std::size_t diag = col[0];
    col[0] += 1;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t up = col[j];
      col[j] = std::min({col[j] + 1, col[j - 1] + 1, diag + (hyp[b] == ref[j - 1] ? 0 : 1)});
      diag = up;
    }
    out.push_back(col[m]);
  }
  return out;
}

}  // namespace

std::size_t edit_distance(std::span<const std::string> a, std::span<const std::string> b) {
  return distances_from(a, 0, b).back();
}

std::vector<std::optional<std::size_t>> align(std::span<const std::string> hyp, std::span<const std::string> ref) {
  const std::size_t n = hyp.size();
  const std::size_t m = ref.size();
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (hyp[i - 1] == ref[j - 1] ? 0 : 1)});
    }
  }
  std::vector<std::optional<std::size_t>> out(n);
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + (hyp[i - 1] == ref[j - 1] ? 0 : 1)) {
      out[i - 1] = j - 1;
      --i;
      --j;
    } else if (j > 0 && d[i][j] == d[i][j - 1] + 1) {
      --j;
    } else {
      --i;
    }
  }
  return out;
}

std::vector<Tokens> Resegmentation::spans(std::span<const std::string> hyp) const {
  std::vector<Tokens> out;
  std::size_t from = 0;
  for (const auto to : boundaries) {
    out.emplace_back(hyp.begin() + static_cast<std::ptrdiff_t>(from), hyp.begin() + static_cast<std::ptrdiff_t>(to));
    from = to;
  }
  return out;
}

Resegmentation resegment(std::span<const std::string> hyp, std::span<const Tokens> refs) {
  if (refs.empty()) throw ParameterError("resegmentation needs at least one reference segment");
  const std::size_t n = hyp.size();
  const std::size_t m = refs.size();

  // best[r][a]: minimum cost of splitting hyp[a, n) over refs[r, m).
  std::vector<std::vector<std::size_t>> best(m + 1, std::vector<std::size_t>(n + 1, kInf));
  best[m][n] = 0;
  for (std::size_t r = m; r-- > 0;) {
    for (std::size_t a = 0; a <= n; ++a) {
      const auto row = distances_from(hyp, a, refs[r]);
      for (std::size_t b = a; b <= n; ++b) {
        if (best[r + 1][b] >= kInf) continue;
        best[r][a] = std::min(best[r][a], row[b - a] + best[r + 1][b]);
      }
    }
  }

  Resegmentation out;
  out.cost = best[0][0];
  std::size_t a = 0;
  for (std::size_t r = 0; r < m; ++r) {
    const auto row = distances_from(hyp, a, refs[r]);
    for (std::size_t b = a; b <= n; ++b) {
      if (best[r + 1][b] < kInf && row[b - a] + best[r + 1][b] == best[r][a]) {
        out.boundaries.push_back(b);
        a = b;
        break;
      }
    }
  }
  return out;
}

}  // namespace slt
