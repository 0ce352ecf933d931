#pragma once

#include <cstdint>
#include <cmath>

namespace specgap {

// Counter-based splittable generator (splitmix64 core).  Sampling loops derive
// one stream per (master_seed, task_index) so results do not depend on the
// order in which workers pick up tasks.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(seed) {}

  static SplitRng for_task(std::uint64_t master_seed, std::uint64_t task_index) {
    SplitRng r(master_seed ^ (0x9e3779b97f4a7c15ULL * (task_index + 1)));
    r.next_u64();
    return r;
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in (0,1); never returns 0 so log() is safe
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_uniform(); }

  // Box-Muller, deterministic formula (no implementation-defined distributions)
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_uniform();
    double u2 = next_uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  int next_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace specgap
