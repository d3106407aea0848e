#ifndef MARKETNET_RNG_HPP
#define MARKETNET_RNG_HPP

#include <array>
#include <cstdint>
#include <string_view>

namespace marketnet::rng {

// Counter-based generation: every variate is a pure function of
// (master_seed, stream kind, stream seed, time index). There is no generator
// state, so ensembles are reproducible regardless of evaluation order and
// shared streams can be read concurrently from any number of stocks.

/// SplitMix64 finalizer; also used to derive keys from seed material.
std::uint64_t splitmix64(std::uint64_t x);

/// One Philox2x64-10 block: 128-bit counter, 64-bit key, 128-bit output.
std::array<std::uint64_t, 2> philox2x64(std::uint64_t key,
                                        std::uint64_t ctr_hi,
                                        std::uint64_t ctr_lo);

/// Map 64 random bits to a uniform in the open interval (0, 1).
double to_open_unit(std::uint64_t bits);

/// Inverse standard normal CDF (Wichura's AS241 PPND16, ~1e-15 relative).
/// Requires p in (0, 1).
double inverse_normal_cdf(double p);

/// Distinguishes per-stock noise streams from shared channel streams so the
/// two keyspaces cannot alias.
enum class StreamKind : std::uint64_t {
    own_noise = 0x6f776e5f6e6f6973ULL,  // epsilon^1, one stream per stock
    channel = 0x6368616e6e656c73ULL,    // epsilon^2, one stream per seed s_i
};

/// Standard normal variate for stream (master_seed, kind, stream_seed) at
/// time index t. Pure function; identical arguments give identical values.
double normal_at(std::uint64_t master_seed, StreamKind kind,
                 std::uint64_t stream_seed, std::uint64_t t);

/// Uniform(0,1) counterpart of normal_at.
double uniform_at(std::uint64_t master_seed, StreamKind kind,
                  std::uint64_t stream_seed, std::uint64_t t);

/// FNV-1a over bytes; platform-independent ticker hashing.
std::uint64_t fnv1a64(std::string_view bytes);

/// Per-stock epsilon^1 stream seed. `channel_tag` separates the walks a stock
/// contributes to different blend channels ('L', 'M', 'N').
std::uint64_t derive_own_seed(std::uint64_t master_seed, std::string_view ticker,
                              char channel_tag);

}  // namespace marketnet::rng

#endif  // MARKETNET_RNG_HPP
