#pragma once
// Shared vocabulary: complex scalars, labeled datasets, deterministic random
// variates and compensated summation. Everything downstream assumes these.

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace holo {

using cx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

struct LabeledSample {
  cx z;      // sample point (real tasks use Im z = 0)
  double t;  // label in {-1, +1}
};

// Finite labeled dataset. The provenance string records how it was built so
// experiment bundles can echo it.
struct Dataset {
  std::vector<LabeledSample> samples;
  std::string provenance;
  int n() const { return static_cast<int>(samples.size()); }
};

// S_n: the n-th roots of unity labeled by sign(Re z). Points with
// |Re z| < 1e-9 carry no sign information and are dropped.
Dataset make_circle_dataset(int n);

// Interval stand-in task: n equispaced points on [0,1] labeled by
// sign(x - 1/2), dropping |x - 1/2| < 1e-9.
Dataset make_interval_dataset(int n);

/** Deterministic random variates. std::mt19937_64 provides the bit stream;
 * the maps to doubles are hand-rolled so output does not depend on the
 * standard library's distribution implementations. */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  // uniform in [0,1)
  double u01() { return (gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * u01(); }
  // standard normal via Box-Muller
  double normal();
  cx complex_normal() { return {normal(), normal()}; }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Compensated (Kahan) sums over a fixed iteration order; deterministic.
double kahan_sum(const double* xs, std::size_t n);
cx kahan_sum(const cx* xs, std::size_t n);

inline double sign0(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

// Shortest round-trip decimal representation; used for all CSV/JSON floats
// so artifacts are byte-stable.
std::string fmt_double(double x);

// FNV-1a over raw bytes; stable content fingerprints for artifacts.
std::uint64_t fnv1a(const void* data, std::size_t n);

// Write via a temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace holo
