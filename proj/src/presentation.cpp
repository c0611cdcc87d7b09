#include "basespace/presentation.hpp"

#include <random>

namespace basespace {

Status in_radius(const DensePresentation& p, const Rational& x, const Rational& y, std::size_t k) {
  const Rational r = DensePresentation::radius(k);
  for (unsigned bits = static_cast<unsigned>(k) + 8; bits <= p.max_bits; bits *= 2) {
    Interval d = p.oracle->distance(x, y, bits);
    if (d.hi < r) return Status::Holds;
    if (d.lo >= r) return Status::Fails;
  }
  return Status::Unknown;
}

HalvingReport validate_halving(const DensePresentation& p, std::size_t max_level, std::size_t samples,
                               std::uint64_t seed) {
  HalvingReport rep;
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k <= max_level; ++k) {
    const std::size_t h = p.halving(k);
    // Offsets are multiples of 2^-(h+2), so about a quarter of the pairs sit
    // inside eps_h.
    const Rational step = pow2(-static_cast<long>(h) - 2);
    for (std::size_t s = 0; s < samples; ++s) {
      Rational x(static_cast<long>(rng() % 2001) - 1000, 1000);
      Rational y = x + step * static_cast<long>(rng() % 9) - step * 4;
      Rational z = y + step * static_cast<long>(rng() % 9) - step * 4;
      ++rep.triples;
      if (in_radius(p, x, y, h) != Status::Holds || in_radius(p, y, z, h) != Status::Holds) continue;
      ++rep.exercised;
      if (in_radius(p, x, z, k) != Status::Holds)
        rep.failures.push_back("level " + std::to_string(k) + ": x=" + p.format(x) + " y=" + p.format(y) +
                               " z=" + p.format(z));
    }
  }
  return rep;
}

}  // namespace basespace
