#pragma once

#include <cstdint>
#include <random>

namespace caver::testing {

// mt19937_64 with hand-rolled bounding so sequences are identical across
// standard libraries (std distributions are implementation-defined).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // uniform in [0, n)
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return v % n;
  }

  int range(int lo, int hi) {  // inclusive both ends
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool chance(double p) { return static_cast<double>(eng_()) < p * 18446744073709551616.0; }

private:
  std::mt19937_64 eng_;
};

}  // namespace caver::testing
