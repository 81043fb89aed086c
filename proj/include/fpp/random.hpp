#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

namespace fpp {

// Counter-based, splittable random stream. A stream is identified by
// (master_seed, path); the path is folded into a 64-bit key one label at a
// time, so derive(derive(s,1),2) and derive(derive(s,2),1) are distinct
// streams. Output at position c is a pure function of (key, c), which makes
// replicate-level parallelism and replay trivial.
//
// Streams can also be constructed as stubs wrapping a prescribed uniform
// sequence; samplers then produce prescribed outputs, which keeps
// injected-randomness tests executable.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t master_seed);

  // Child stream; parent is unchanged.
  [[nodiscard]] RandomStream derive(std::uint64_t label) const;

  // Next raw 64-bit word. Not available on stub streams.
  std::uint64_t next_u64();

  // Uniform draw on the open interval (0,1): the zero word maps to the
  // smallest positive grid value so that -log(u) stays finite.
  double next_uniform();

  std::uint64_t key() const { return key_; }
  bool is_stub() const { return stub_ != nullptr; }

  // Stream whose uniform draws are the given values, in order. Draws past
  // the end throw.
  static RandomStream stub(std::vector<double> uniforms);

 private:
  RandomStream() = default;

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  std::shared_ptr<const std::vector<double>> stub_;
  std::size_t stub_pos_ = 0;
};

namespace detail {

// Two finalizer rounds of splitmix64-style mixing keyed by b. Statistical
// quality is checked by the KS/chi-square suite in the tests.
inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a + 0x9e3779b97f4a7c15ULL * (b + 0x632be59bd9b4e019ULL);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  x ^= x >> 31;
  x += b ^ 0xd1342543de82ef95ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double u64_to_open_unit(std::uint64_t x) {
  double u = static_cast<double>(x >> 11) * 0x1.0p-53;
  if (u == 0.0) u = 0x1.0p-53;
  return u;
}

}  // namespace detail

// Exponential draw with the given mean (mean = 1/rate). The mean
// parameterization is used everywhere in this project.
double sample_exponential(RandomStream& stream, double mean);

// Standard Gumbel draw, CDF exp(-exp(-x)).
double sample_gumbel(RandomStream& stream);

// Poisson draw via unit-exponential inter-arrival counting; exact, O(mean).
std::uint64_t sample_poisson(RandomStream& stream, double mean);

// All points Y_1 > Y_2 > ... >= floor of the Poisson process with intensity
// gamma * exp(-y) on the line, generated as Y_s = -log(S_s / gamma) where S_s
// are partial sums of unit exponentials. Generation stops at the first
// S_s > gamma * exp(-floor); the stopped point is discarded.
std::vector<double> sample_ppp(RandomStream& stream, double gamma, double floor);

// Lazily evaluated symmetric edge weights on the implicit complete graph with
// n vertices (0-based). weight(i,j) is exponential with the configured mean,
// keyed deterministically by (stream key, unordered pair), so re-querying a
// pair returns the identical value without storing all pairs.
class EdgeWeightOracle {
 public:
  virtual ~EdgeWeightOracle() = default;

  virtual double weight(std::uint32_t i, std::uint32_t j) const = 0;

  std::uint32_t n() const { return n_; }
  double mean() const { return mean_; }

 protected:
  EdgeWeightOracle(std::uint32_t n, double mean);
  void check_pair(std::uint32_t i, std::uint32_t j) const;

  std::uint32_t n_;
  double mean_;
};

class HashedEdgeOracle final : public EdgeWeightOracle {
 public:
  // mean <= 0 selects the model default, mean = n.
  HashedEdgeOracle(std::uint32_t n, const RandomStream& stream, double mean = 0.0);

  double weight(std::uint32_t i, std::uint32_t j) const override;

 private:
  std::uint64_t edge_key_;
};

// Fully materialized weight table. Used for injected test instances and as a
// cache in front of a hashed oracle when all pairs will be visited anyway.
class TableEdgeOracle final : public EdgeWeightOracle {
 public:
  TableEdgeOracle(std::uint32_t n, double mean);

  static TableEdgeOracle materialize(const EdgeWeightOracle& src);

  double weight(std::uint32_t i, std::uint32_t j) const override;
  void set_weight(std::uint32_t i, std::uint32_t j, double w);

  const std::vector<double>& table() const { return w_; }

 private:
  std::vector<double> w_;
};

}  // namespace fpp
