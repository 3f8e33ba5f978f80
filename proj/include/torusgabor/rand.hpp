// Deterministic uniform variates from splitmix64.  Every randomized routine
// in the library draws through this so that a fixed seed reproduces results
// bit for bit on any platform; standard-library distributions are
// implementation-defined and are not used.

#ifndef TORUSGABOR_RAND_HPP
#define TORUSGABOR_RAND_HPP

#include <cstdint>

namespace torusgabor::detail {

inline double splitmix_uniform(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
}

} // namespace torusgabor::detail

#endif
