#include "lpn/rng.hpp"

#include <stdexcept>

namespace lpn {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t lane_seed(std::uint64_t master, std::string_view label) { return splitmix64(master ^ fnv1a64(label)); }

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    // Rejection sampling on the top of the range.
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

BitVec Rng::bits(std::size_t len) {
    BitVec v(len);
    auto words = v.words();
    for (auto& w : words) w = engine_();
    if (len % BitVec::kWordBits != 0 && !words.empty()) {
        words.back() &= (BitVec::Word{1} << (len % BitVec::kWordBits)) - 1;
    }
    return v;
}

}  // namespace lpn
