#include "osr/workload.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace osr {

std::vector<Key> gen_gaussian_keys(const SkewConfig& cfg, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, cfg.sigma);
  std::vector<Key> keys;
  keys.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Truncated normal by rejection: large sigma degenerates to ~uniform
    // on [-1, 1] instead of piling mass on the endpoints.
    double x;
    do {
      x = dist(rng);
    } while (x < -1.0 || x > 1.0);
    const double scaled = (x + 1.0) / 2.0 * static_cast<double>(cfg.key_space);
    auto k = static_cast<Key>(scaled);
    if (k >= cfg.key_space) k = cfg.key_space - 1;
    keys.push_back(k);
  }
  return keys;
}

InputGen make_input_gen(const SkewConfig& skew, std::uint64_t seed) {
  // Keys are drawn lazily but deterministically per index so the generator
  // stays a pure function of i.
  const double sigma = skew.sigma;
  const std::uint64_t key_space = skew.key_space;
  return [sigma, key_space, seed](std::uint64_t i) {
    Tuple t;
    t.value = mix64(seed ^ (i + 1));
    // Mixed words feed Box-Muller draws; cheaper than carrying RNG state
    // and reproducible at any index. Rejection keeps the truncated-normal
    // shape; the clamp only backstops an absurdly unlucky index.
    const std::uint64_t base = mix64(t.value + 0x2545f4914f6cdd1dULL);
    double x = 0.0;
    for (std::uint64_t a = 0; a < 64; ++a) {
      const double u1 =
          (static_cast<double>(mix64(base + 2 * a + 1) >> 11) + 1.0) / 9007199254740994.0;
      const double u2 =
          static_cast<double>(mix64(base + 2 * a + 2) >> 11) / 9007199254740992.0;
      const double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2) * sigma;
      if (g >= -1.0 && g <= 1.0) {
        x = g;
        break;
      }
      x = std::clamp(g, -1.0, 1.0);
    }
    auto k = static_cast<Key>((x + 1.0) / 2.0 * static_cast<double>(key_space));
    if (k >= key_space) k = key_space - 1;
    t.key = k;
    return t;
  };
}

}  // namespace osr
