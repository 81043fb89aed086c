#include "fpp/random.hpp"

#include <cmath>
#include <limits>

namespace fpp {

RandomStream::RandomStream(std::uint64_t master_seed)
    : key_(detail::mix(0x243f6a8885a308d3ULL, master_seed)) {}

RandomStream RandomStream::derive(std::uint64_t label) const {
  if (stub_) throw std::logic_error("RandomStream: cannot derive from a stub stream");
  RandomStream child;
  child.key_ = detail::mix(key_, label ^ 0x452821e638d01377ULL);
  return child;
}

std::uint64_t RandomStream::next_u64() {
  if (stub_) throw std::logic_error("RandomStream: stub streams provide uniforms only");
  return detail::mix(key_, counter_++);
}

double RandomStream::next_uniform() {
  if (stub_) {
    if (stub_pos_ >= stub_->size())
      throw std::out_of_range("RandomStream: stub sequence exhausted");
    return (*stub_)[stub_pos_++];
  }
  return detail::u64_to_open_unit(next_u64());
}

RandomStream RandomStream::stub(std::vector<double> uniforms) {
  RandomStream s;
  s.stub_ = std::make_shared<const std::vector<double>>(std::move(uniforms));
  return s;
}

double sample_exponential(RandomStream& stream, double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("sample_exponential: mean must be positive");
  return -mean * std::log(stream.next_uniform());
}

double sample_gumbel(RandomStream& stream) {
  return -std::log(-std::log(stream.next_uniform()));
}

std::uint64_t sample_poisson(RandomStream& stream, double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("sample_poisson: mean must be nonnegative");
  // N = #{k : S_k <= mean}, S_k partial sums of unit exponentials.
  std::uint64_t count = 0;
  double s = 0.0;
  for (;;) {
    s += sample_exponential(stream, 1.0);
    if (s > mean) return count;
    ++count;
  }
}

std::vector<double> sample_ppp(RandomStream& stream, double gamma, double floor) {
  if (!(gamma > 0.0)) throw std::invalid_argument("sample_ppp: gamma must be positive");
  const double s_stop = gamma * std::exp(-floor);
  std::vector<double> points;
  double s = 0.0;
  for (;;) {
    s += sample_exponential(stream, 1.0);
    if (s > s_stop) break;
    points.push_back(-std::log(s / gamma));
  }
  return points;
}

EdgeWeightOracle::EdgeWeightOracle(std::uint32_t n, double mean) : n_(n), mean_(mean) {
  if (n < 2) throw std::invalid_argument("EdgeWeightOracle: need n >= 2");
  if (!(mean_ > 0.0)) throw std::invalid_argument("EdgeWeightOracle: mean must be positive");
}

void EdgeWeightOracle::check_pair(std::uint32_t i, std::uint32_t j) const {
  if (i >= n_ || j >= n_) throw std::out_of_range("edge weight: vertex out of range");
  if (i == j) throw std::invalid_argument("edge weight: self-loop is undefined");
}

HashedEdgeOracle::HashedEdgeOracle(std::uint32_t n, const RandomStream& stream, double mean)
    : EdgeWeightOracle(n, mean > 0.0 ? mean : static_cast<double>(n)),
      edge_key_(stream.key()) {
  if (stream.is_stub())
    throw std::invalid_argument("HashedEdgeOracle: stub streams are not keyable");
}

double HashedEdgeOracle::weight(std::uint32_t i, std::uint32_t j) const {
  check_pair(i, j);
  const std::uint64_t a = i < j ? i : j;
  const std::uint64_t b = i < j ? j : i;
  const double u = detail::u64_to_open_unit(detail::mix(edge_key_, (a << 32) | b));
  return -mean_ * std::log(u);
}

TableEdgeOracle::TableEdgeOracle(std::uint32_t n, double mean)
    : EdgeWeightOracle(n, mean),
      w_(static_cast<std::size_t>(n) * n, std::numeric_limits<double>::quiet_NaN()) {}

TableEdgeOracle TableEdgeOracle::materialize(const EdgeWeightOracle& src) {
  TableEdgeOracle out(src.n(), src.mean());
  const std::uint32_t n = src.n();
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      out.set_weight(i, j, src.weight(i, j));
  return out;
}

double TableEdgeOracle::weight(std::uint32_t i, std::uint32_t j) const {
  check_pair(i, j);
  return w_[static_cast<std::size_t>(i) * n_ + j];
}

void TableEdgeOracle::set_weight(std::uint32_t i, std::uint32_t j, double w) {
  check_pair(i, j);
  if (!(w > 0.0)) throw std::invalid_argument("edge weight must be positive");
  w_[static_cast<std::size_t>(i) * n_ + j] = w;
  w_[static_cast<std::size_t>(j) * n_ + i] = w;
}

}  // namespace fpp
