#ifndef QAKD_RNG_HPP
#define QAKD_RNG_HPP

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace qakd {

// Every random draw in the toolkit goes through this contract so results are
// reproducible across standard libraries:
//   * generator: std::mt19937_64 constructed directly from the 64-bit seed
//     (its output sequence is fixed by the C++ standard);
//   * uniform_index(n): draw r = gen(); reject while r < (2^64 mod n);
//     return r mod n;
//   * uniform_unit(): (gen() >> 11) * 2^-53, a double in [0, 1);
//   * shuffle: Fisher-Yates from the back, swapping i with uniform_index(i + 1);
//   * derive_seed(seed, stream): splitmix64 finaliser of seed + (stream + 1) * golden gamma,
//     used to give independent pipeline stages their own substream.
using Rng = std::mt19937_64;

std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

double uniform_unit(Rng& rng);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(rng, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace qakd

#endif  // QAKD_RNG_HPP
