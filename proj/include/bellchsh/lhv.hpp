#ifndef BELLCHSH_LHV_HPP
#define BELLCHSH_LHV_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bellchsh/errors.hpp"
#include "bellchsh/tolerances.hpp"

namespace bellchsh {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

/// A measurement direction; construction rejects vectors off the unit sphere.
class UnitVector {
 public:
  explicit UnitVector(const Vec3& v) : v_(v) {
    const double n = std::sqrt(dot(v, v));
    if (!std::isfinite(n) || std::fabs(n - 1.0) > tol::kConstruction) {
      throw DomainError("UnitVector: norm " + std::to_string(n) + " is not 1");
    }
  }
  /// Direction (sin theta cos phi, sin theta sin phi, cos theta).
  static UnitVector spherical(double theta, double phi) {
    const Vec3 v{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
    const double n = std::sqrt(dot(v, v));
    return UnitVector({v[0] / n, v[1] / n, v[2] / n});
  }
  /// Direction at angle phi in the x-y plane.
  static UnitVector planar(double phi) { return spherical(std::numbers::pi / 2, phi); }

  const Vec3& vec() const noexcept { return v_; }

 private:
  Vec3 v_;
};

inline double angle_between(const UnitVector& a, const UnitVector& b) {
  return std::acos(std::clamp(dot(a.vec(), b.vec()), -1.0, 1.0));
}

/// Hidden-variable model: a sampler for lambda and two local +-1 responses.
/// Each response sees only its own setting.
struct LhvModel {
  std::string name;
  std::function<Vec3(std::mt19937_64&)> sampler;
  std::function<int(const UnitVector&, const Vec3&)> response_a;
  std::function<int(const UnitVector&, const Vec3&)> response_b;
};

/// Uniform point on the unit sphere from a normalized Gaussian triple.
inline Vec3 sample_sphere(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    const Vec3 v{g(rng), g(rng), g(rng)};
    const double n = std::sqrt(dot(v, v));
    if (n > 1e-300) return {v[0] / n, v[1] / n, v[2] / n};
  }
}

/// A(a, l) = sign(a.l), B(b, l) = -sign(b.l), sign(0) = +1.
inline LhvModel sign_model() {
  auto sgn = [](double x) { return x >= 0.0 ? 1 : -1; };
  return {"sign", sample_sphere,
          [sgn](const UnitVector& a, const Vec3& l) { return sgn(dot(a.vec(), l)); },
          [sgn](const UnitVector& b, const Vec3& l) { return -sgn(dot(b.vec(), l)); }};
}

/// Named models; "sign" is always present.
class ModelRegistry {
 public:
  ModelRegistry() { add(sign_model()); }

  void add(LhvModel m) {
    if (!m.sampler || !m.response_a || !m.response_b) {
      throw DomainError("ModelRegistry: model '" + m.name + "' is incomplete");
    }
    models_[m.name] = std::move(m);
  }

  const LhvModel& get(const std::string& name) const {
    const auto it = models_.find(name);
    if (it == models_.end()) {
      std::string valid;
      for (const auto& [k, v] : models_) valid += (valid.empty() ? "" : ", ") + k;
      throw DomainError("unknown LHV model '" + name + "' (valid: " + valid + ")");
    }
    return it->second;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : models_) out.push_back(k);
    return out;
  }

 private:
  std::map<std::string, LhvModel> models_;
};

struct LhvEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

struct ChshLhvEstimate {
  LhvEstimate chsh;
  std::array<double, 4> correlations{};  // E(a,b), E(a',b), E(a,b'), E(a',b')
  std::size_t samples_with_square_four = 0;
};

inline constexpr std::size_t kLhvBlock = 65'536;
inline constexpr std::size_t kDefaultLhvSamples = 1'000'000;

/// Block k draws from mt19937_64 seeded with splitmix64(seed + k * golden);
/// blocks are fixed, so sharding over workers leaves every sum unchanged.
inline std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) {
  std::uint64_t z = seed + (block + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace detail {

inline int checked_response(int r, const char* who) {
  if (r != 1 && r != -1) {
    throw NumericGuardError(std::string(who) + ": response " + std::to_string(r) + " is not +-1");
  }
  return r;
}

/// Runs `per_block(block_index, count)` for every block over `workers` threads.
template <typename PerBlock>
void for_each_block(std::size_t n, unsigned workers, PerBlock&& per_block) {
  const std::size_t blocks = (n + kLhvBlock - 1) / kLhvBlock;
  unsigned w = workers != 0 ? workers : std::max(1u, std::thread::hardware_concurrency());
  w = static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(blocks, 1)));
  auto run = [&](unsigned id) {
    for (std::size_t b = id; b < blocks; b += w) {
      const std::size_t first = b * kLhvBlock;
      per_block(b, std::min(kLhvBlock, n - first));
    }
  };
  if (w <= 1) {
    run(0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (unsigned id = 0; id < w; ++id) pool.emplace_back(run, id);
  for (auto& t : pool) t.join();
}

inline LhvEstimate finish(long long sum, long long sum_sq, std::size_t n) {
  LhvEstimate e;
  e.samples = n;
  const double nn = static_cast<double>(n);
  e.mean = static_cast<double>(sum) / nn;
  if (n > 1) {
    const double var = (static_cast<double>(sum_sq) - nn * e.mean * e.mean) / (nn - 1.0);
    e.std_error = std::sqrt(std::max(var, 0.0) / nn);
  }
  return e;
}

}  // namespace detail

/// Monte-Carlo estimate of E(a, b) = integral rho(l) A(a, l) B(b, l).
inline LhvEstimate estimate_E(const LhvModel& model, const UnitVector& a, const UnitVector& b, std::size_t n,
                              std::uint64_t seed, unsigned workers = 0) {
  if (n == 0) throw DomainError("estimate_E: need at least one sample");
  const std::size_t blocks = (n + kLhvBlock - 1) / kLhvBlock;
  std::vector<long long> sums(blocks, 0);
  detail::for_each_block(n, workers, [&](std::size_t blk, std::size_t count) {
    std::mt19937_64 rng(block_seed(seed, blk));
    long long s = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const Vec3 l = model.sampler(rng);
      s += detail::checked_response(model.response_a(a, l), "response_a") *
           detail::checked_response(model.response_b(b, l), "response_b");
    }
    sums[blk] = s;
  });
  long long total = 0;
  for (const long long s : sums) total += s;
  // Each product is +-1, so the sum of squares is n.
  return detail::finish(total, static_cast<long long>(n), n);
}

/// Averages the per-draw combination A(a)B(b) + A(a')B(b) + A(a)B(b') - A(a')B(b').
inline ChshLhvEstimate chsh_lhv(const LhvModel& model, const std::array<UnitVector, 4>& settings, std::size_t n,
                                std::uint64_t seed, unsigned workers = 0) {
  if (n == 0) throw DomainError("chsh_lhv: need at least one sample");
  const auto& [a, ap, b, bp] = settings;
  struct Sums {
    long long c = 0;
    long long c2 = 0;
    std::array<long long, 4> e{};
    std::size_t four = 0;
  };
  const std::size_t blocks = (n + kLhvBlock - 1) / kLhvBlock;
  std::vector<Sums> sums(blocks);
  detail::for_each_block(n, workers, [&](std::size_t blk, std::size_t count) {
    std::mt19937_64 rng(block_seed(seed, blk));
    Sums s;
    for (std::size_t i = 0; i < count; ++i) {
      const Vec3 l = model.sampler(rng);
      const int ra = detail::checked_response(model.response_a(a, l), "response_a");
      const int rap = detail::checked_response(model.response_a(ap, l), "response_a");
      const int rb = detail::checked_response(model.response_b(b, l), "response_b");
      const int rbp = detail::checked_response(model.response_b(bp, l), "response_b");
      const std::array<int, 4> e{ra * rb, rap * rb, ra * rbp, rap * rbp};
      const int c = e[0] + e[1] + e[2] - e[3];
      s.c += c;
      s.c2 += c * c;
      for (std::size_t k = 0; k < 4; ++k) s.e[k] += e[k];
      if (c * c == 4) ++s.four;
    }
    sums[blk] = s;
  });
  Sums t;
  for (const auto& s : sums) {
    t.c += s.c;
    t.c2 += s.c2;
    for (std::size_t k = 0; k < 4; ++k) t.e[k] += s.e[k];
    t.four += s.four;
  }
  ChshLhvEstimate out;
  out.chsh = detail::finish(t.c, t.c2, n);
  for (std::size_t k = 0; k < 4; ++k) out.correlations[k] = static_cast<double>(t.e[k]) / static_cast<double>(n);
  out.samples_with_square_four = t.four;
  return out;
}

/// Exact correlation of the sign model for settings at angle theta.
inline double sign_model_correlation(double theta) { return -1.0 + 2.0 * theta / std::numbers::pi; }

/// Singlet correlation <psi_s| (a.sigma) (x) (b.sigma) |psi_s> = -a.b.
inline double quantum_singlet_correlation(const UnitVector& a, const UnitVector& b) {
  return -dot(a.vec(), b.vec());
}

/// Default directions in the x-y plane: a = 0, a' = pi/2, b = pi/4, b' = -pi/4.
inline std::array<UnitVector, 4> default_lhv_settings() {
  return {UnitVector::planar(0.0), UnitVector::planar(std::numbers::pi / 2),
          UnitVector::planar(std::numbers::pi / 4), UnitVector::planar(-std::numbers::pi / 4)};
}

/// Quantum CHSH value of the singlet at the same four directions.
inline double quantum_singlet_chsh(const std::array<UnitVector, 4>& s) {
  return quantum_singlet_correlation(s[0], s[2]) + quantum_singlet_correlation(s[1], s[2]) +
         quantum_singlet_correlation(s[0], s[3]) - quantum_singlet_correlation(s[1], s[3]);
}

}  // namespace bellchsh

#endif  // BELLCHSH_LHV_HPP
