#include "warpfield/wick.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <string>

#include "warpfield/errors.hpp"

namespace warpfield::wick {

namespace {

void recurse(std::vector<bool>& used, std::vector<std::pair<int, int>>& cur,
             std::vector<std::vector<std::pair<int, int>>>& out) {
  const int m = static_cast<int>(used.size());
  int i = 0;
  while (i < m && used[i]) ++i;
  if (i == m) {
    out.push_back(cur);
    return;
  }
  used[i] = true;
  for (int j = i + 1; j < m; ++j) {
    if (used[j]) continue;
    used[j] = true;
    cur.emplace_back(i, j);
    recurse(used, cur, out);
    cur.pop_back();
    used[j] = false;
  }
  used[i] = false;
}

std::vector<int> word_of(const std::vector<std::pair<int, int>>& p) {
  const std::size_t n = p.size();
  std::vector<int> w(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = p[k].first;
    w[k + n] = p[k].second;
  }
  return w;
}

}  // namespace

std::vector<int> PairingSet::permutation(std::size_t i) const { return word_of(pairings.at(i)); }

long long double_factorial_odd(int n) {
  long long r = 1;
  for (int k = 2 * n - 1; k > 1; k -= 2) r *= k;
  return r;
}

int permutation_sign(const std::vector<int>& word) {
  std::vector<bool> seen(word.size(), false);
  int sign = 1;
  for (std::size_t s = 0; s < word.size(); ++s) {
    if (seen[s]) continue;
    std::size_t len = 0;
    for (std::size_t j = s; !seen[j]; j = static_cast<std::size_t>(word[j])) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

const PairingSet& enumerate_pairings(int n, Statistics statistics, int max_pairs) {
  if (n < 0) throw PreconditionError("enumerate_pairings: n must be non-negative");
  if (n > max_pairs)
    throw ResourceError("enumerate_pairings: n=" + std::to_string(n) + " exceeds limit " +
                        std::to_string(max_pairs));

  static std::mutex mu;
  static std::map<std::pair<int, int>, PairingSet> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(n, static_cast<int>(statistics));
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  PairingSet set;
  set.n = n;
  set.statistics = statistics;
  std::vector<bool> used(static_cast<std::size_t>(2 * n), false);
  std::vector<std::pair<int, int>> cur;
  recurse(used, cur, set.pairings);
  std::sort(set.pairings.begin(), set.pairings.end(),
            [](const auto& a, const auto& b) { return word_of(a) < word_of(b); });
  const int global = ((n * (n - 1) / 2) % 2 == 0) ? 1 : -1;
  for (const auto& p : set.pairings)
    set.signs.push_back(statistics == Statistics::bose ? 1 : global * permutation_sign(word_of(p)));
  return cache.emplace(key, std::move(set)).first->second;
}

std::complex<double> assemble_npoint(const PairingSet& pairings, const TwoPoint& two_point) {
  std::complex<double> total = 0.0;
  for (std::size_t i = 0; i < pairings.pairings.size(); ++i) {
    std::complex<double> prod = static_cast<double>(pairings.signs[i]);
    for (const auto& [a, b] : pairings.pairings[i]) prod *= two_point(a, b);
    total += prod;
  }
  return total;
}

}  // namespace warpfield::wick
