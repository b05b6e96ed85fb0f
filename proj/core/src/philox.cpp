#include "ibm/random/philox.hpp"

#include <cmath>
#include <numbers>

namespace ibm {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double u53(std::uint64_t x) {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, ctr[0], hi0, lo0);
    mulhilo(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t mix_stream(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (b + 0x632BE59BD9B4E019ull));
}

std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index) {
  return mix_stream(master, index);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

void Rng::refill() {
  const PhiloxCounter ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                          static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  const PhiloxKey key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
  buf_ = philox4x32_10(ctr, key);
  ++block_;
  pos_ = 0;
}

Rng::result_type Rng::operator()() {
  if (pos_ >= 4) refill();
  return buf_[static_cast<std::size_t>(pos_++)];
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t lo = (*this)();
  const std::uint64_t hi = (*this)();
  return (hi << 32) | lo;
}

double Rng::uniform() { return u53(next_u64()); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  spare_ = rad * std::sin(ang);
  has_spare_ = true;
  return rad * std::cos(ang);
}

Rng Rng::split(std::uint64_t child) const {
  return Rng(seed_, mix_stream(stream_, child));
}

std::pair<double, double> Rng::gaussian_pair_at(std::uint64_t seed, std::uint64_t stream,
                                                std::uint64_t index) {
  const PhiloxCounter ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  const PhiloxKey key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  const auto out = philox4x32_10(ctr, key);
  const double u1 = u53((static_cast<std::uint64_t>(out[1]) << 32) | out[0]);
  const double u2 = u53((static_cast<std::uint64_t>(out[3]) << 32) | out[2]);
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  return {rad * std::cos(ang), rad * std::sin(ang)};
}

}  // namespace ibm
