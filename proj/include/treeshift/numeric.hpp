#ifndef TREESHIFT_NUMERIC_HPP
#define TREESHIFT_NUMERIC_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <thread>
#include <vector>

namespace treeshift {

using Complex = std::complex<double>;

// Neumaier-compensated accumulator. Cone sums and slice sums run through
// this so that deep truncations do not quietly lose low-order bits.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class KahanComplexSum {
 public:
  void add(Complex z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  Complex value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_;
  KahanSum im_;
};

// Deterministic xoshiro-free generator: std::mt19937_64 with a hand-rolled
// uniform mapping. The standard distributions are not pinned across library
// implementations, so tests and the oracle avoid them.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    // splitmix64; small, stable, good enough for seeding work vectors.
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [a, b).
  double next_in(double a, double b) { return a + (b - a) * next_unit(); }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  Complex next_complex_in_disc(double radius) {
    // Rejection-free: radius via sqrt for uniform area, angle uniform.
    double r = radius * std::sqrt(next_unit());
    double t = 6.283185307179586476925286766559 * next_unit();
    return {r * std::cos(t), r * std::sin(t)};
  }

 private:
  std::uint64_t state_;
};

// Worker cap for the scan-heavy routines. Every parallel reduction in this
// library combines per-chunk results in chunk order, so the outcome is
// bit-identical for any thread count.
struct ExecPolicy {
  int threads = 1;
};

// Splits [0, n) into contiguous chunks and runs fn(chunk_index, begin, end).
// Chunk boundaries depend only on n and the thread cap, never on timing.
template <typename Fn>
inline void run_chunked(std::size_t n, int threads, std::size_t min_per_chunk,
                        Fn&& fn) {
  int workers = threads < 1 ? 1 : threads;
  std::size_t max_chunks = min_per_chunk ? (n + min_per_chunk - 1) / min_per_chunk : 1;
  std::size_t chunks = std::min<std::size_t>(workers, max_chunks ? max_chunks : 1);
  if (chunks <= 1 || n == 0) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  std::size_t base = n / chunks, extra = n % chunks, begin = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    std::size_t len = base + (c < extra ? 1 : 0);
    std::size_t end = begin + len;
    pool.emplace_back([c, begin, end, &fn] { fn(c, begin, end); });
    begin = end;
  }
  for (auto& t : pool) t.join();
}

inline std::size_t chunk_count(std::size_t n, int threads, std::size_t min_per_chunk) {
  int workers = threads < 1 ? 1 : threads;
  std::size_t max_chunks = min_per_chunk ? (n + min_per_chunk - 1) / min_per_chunk : 1;
  std::size_t chunks = std::min<std::size_t>(workers, max_chunks ? max_chunks : 1);
  return chunks <= 1 || n == 0 ? 1 : chunks;
}

}  // namespace treeshift

#endif
