#pragma once

#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "isltopo/graph.hpp"

namespace testutil {

using Pairs = std::vector<std::pair<int, int>>;

inline isltopo::CandidateEdgeSetPtr plain(int n, const Pairs& pairs) {
  return std::make_shared<const isltopo::CandidateEdgeSet>(isltopo::CandidateEdgeSet::from_pairs(n, pairs));
}

inline Pairs cycle(int n) {
  Pairs p;
  for (int i = 0; i < n; ++i) p.emplace_back(std::min(i, (i + 1) % n), std::max(i, (i + 1) % n));
  return p;
}

inline Pairs path(int n) {
  Pairs p;
  for (int i = 0; i + 1 < n; ++i) p.emplace_back(i, i + 1);
  return p;
}

inline Pairs complete(int n) {
  Pairs p;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) p.emplace_back(i, j);
  return p;
}

/// G(n, p) edge list in lexicographic pair order.
inline Pairs gnp(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  Pairs out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) out.emplace_back(i, j);
  return out;
}

}  // namespace testutil
