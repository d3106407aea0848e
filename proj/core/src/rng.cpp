#include "marketnet/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace marketnet::rng {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

namespace {

constexpr std::uint64_t kPhiloxM = 0xD2B74407B1CE6E93ULL;   // 2x64 multiplier
constexpr std::uint64_t kPhiloxW = 0x9E3779B97F4A7C15ULL;   // Weyl key bump

inline void mulhilo64(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                      std::uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

}  // namespace

std::array<std::uint64_t, 2> philox2x64(std::uint64_t key, std::uint64_t ctr_hi,
                                        std::uint64_t ctr_lo) {
    std::uint64_t x0 = ctr_lo;
    std::uint64_t x1 = ctr_hi;
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi, lo;
        mulhilo64(x0, kPhiloxM, hi, lo);
        x0 = hi ^ key ^ x1;
        x1 = lo;
        key += kPhiloxW;
    }
    return {x0, x1};
}

double to_open_unit(std::uint64_t bits) {
    // 52 high bits, centered in the bin. Every (k + 0.5) * 2^-52 is exactly
    // representable, so the result can never round to 0 or 1. (With 53 bits
    // the top bin lands halfway between 1 - 2^-53 and 1 and rounds to 1.)
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

double inverse_normal_cdf(double p) {
    // Wichura (1988), algorithm AS241, PPND16.
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("inverse_normal_cdf: p must be in (0,1)");

    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                  6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
              1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
        const double den =
            (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                  3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
              4.2313330701600911252e+1) * r + 1.0);
        return q * num / den;
    }

    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
        value = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        value = num / den;
    }
    return (q < 0.0) ? -value : value;
}

namespace {

inline std::uint64_t stream_key(std::uint64_t master_seed, StreamKind kind) {
    return splitmix64(splitmix64(master_seed) ^ static_cast<std::uint64_t>(kind));
}

}  // namespace

double uniform_at(std::uint64_t master_seed, StreamKind kind,
                  std::uint64_t stream_seed, std::uint64_t t) {
    const auto block = philox2x64(stream_key(master_seed, kind), stream_seed, t);
    return to_open_unit(block[0]);
}

double normal_at(std::uint64_t master_seed, StreamKind kind,
                 std::uint64_t stream_seed, std::uint64_t t) {
    return inverse_normal_cdf(uniform_at(master_seed, kind, stream_seed, t));
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_own_seed(std::uint64_t master_seed, std::string_view ticker,
                              char channel_tag) {
    const std::uint64_t tag = static_cast<std::uint64_t>(
        static_cast<unsigned char>(channel_tag));
    return splitmix64(fnv1a64(ticker) ^ splitmix64(master_seed ^ (tag << 56)));
}

}  // namespace marketnet::rng
