#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace warpfield::wick {

enum class Statistics { bose, fermi };

// Perfect matchings of {0..2n-1}. Each matching is stored as the pairs
// (pi(k), pi(k+n)), k = 0..n-1, with pi(0) < ... < pi(n-1) and pi(k) < pi(k+n).
struct PairingSet {
  int n = 0;
  Statistics statistics = Statistics::bose;
  std::vector<std::vector<std::pair<int, int>>> pairings;
  std::vector<int> signs;

  // The permutation word (pi(0), ..., pi(2n-1)) of matching i.
  std::vector<int> permutation(std::size_t i) const;
};

inline constexpr int kDefaultMaxPairs = 6;

// (2n-1)!! matchings in lexicographic order of the permutation word.
// Fermi signs are (-1)^{n(n-1)/2} sgn(pi). Throws ResourceError when n > max_pairs.
const PairingSet& enumerate_pairings(int n, Statistics statistics, int max_pairs = kDefaultMaxPairs);

long long double_factorial_odd(int n);
int permutation_sign(const std::vector<int>& word);

using TwoPoint = std::function<std::complex<double>(int, int)>;

std::complex<double> assemble_npoint(const PairingSet& pairings, const TwoPoint& two_point);

}  // namespace warpfield::wick
