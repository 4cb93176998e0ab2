#pragma once

/*!
  \file rng.hpp
  \brief Seedable, platform-independent random streams.

  The engine is std::mt19937_64, whose output sequence is fixed by the
  C++ standard. Seeding goes through std::seed_seq, also fully specified.
  Child stream `k` of seed `s` is seeded from the words
  (lo(s), hi(s), lo(k), hi(k), 1); the root stream of `s` from
  (lo(s), hi(s), 0). Distributions are derived here rather than taken from
  <random>, whose distributions differ between standard libraries.
*/

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace ltl2a
{

inline constexpr std::uint64_t default_seed = 20210701;

class rng
{
public:
  explicit rng( std::uint64_t seed = default_seed ) : seed_( seed )
  {
    std::seed_seq seq{ lo( seed ), hi( seed ), std::uint32_t{ 0 } };
    engine_.seed( seq );
  }

  /* independent stream number `index` derived from `seed` */
  static rng stream( std::uint64_t seed, std::uint64_t index )
  {
    rng r;
    r.seed_ = seed;
    std::seed_seq seq{ lo( seed ), hi( seed ), lo( index ), hi( index ), std::uint32_t{ 1 } };
    r.engine_.seed( seq );
    return r;
  }

  rng child( std::uint64_t index ) const { return stream( seed_, index ); }

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next() { return engine_(); }

  /* uniform on [0, n) by rejection; n > 0 */
  std::uint64_t below( std::uint64_t n )
  {
    std::uint64_t const limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    for ( ;; )
    {
      std::uint64_t const x = engine_();
      if ( x < limit )
        return x % n;
    }
  }

  /* uniform on the closed range [lo, hi] */
  std::int64_t between( std::int64_t lo_incl, std::int64_t hi_incl )
  {
    return lo_incl + static_cast<std::int64_t>( below( static_cast<std::uint64_t>( hi_incl - lo_incl ) + 1 ) );
  }

  /* uniform on [0, 1) with 53 random bits */
  double uniform() { return static_cast<double>( engine_() >> 11 ) * 0x1.0p-53; }

  bool bernoulli( double p ) { return uniform() < p; }

  /* standard normal via Box-Muller */
  double normal()
  {
    double u1 = uniform();
    while ( u1 <= 0.0 )
      u1 = uniform();
    double const u2 = uniform();
    return std::sqrt( -2.0 * std::log( u1 ) ) * std::cos( 2.0 * 3.14159265358979323846 * u2 );
  }

private:
  static std::uint32_t lo( std::uint64_t x ) { return static_cast<std::uint32_t>( x & 0xffffffffu ); }
  static std::uint32_t hi( std::uint64_t x ) { return static_cast<std::uint32_t>( x >> 32 ); }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

} // namespace ltl2a
