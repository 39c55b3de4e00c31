#pragma once

#include <cstdint>
#include <random>

namespace pcn {

// Seeded random stream. One stream per logical replica: identical
// (seed, stream_id) pairs replay the identical sample sequence bit for bit,
// distinct stream_ids give independently seeded generators. The Gaussian
// transform is done by hand (Marsaglia polar) so the output sequence does not
// depend on the standard library's normal_distribution implementation.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // uniform on the open interval (0,1)
  double uniform();
  // standard normal
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pcn
