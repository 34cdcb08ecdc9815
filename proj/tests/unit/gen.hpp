#pragma once

#include <cstdint>
#include <random>
#include <vector>

// Hand-rolled generators for property tests.
namespace gen {

inline std::mt19937_64& rng()
{
    static std::mt19937_64 r(0x5eed1234abcdULL);
    return r;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }
inline int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline std::vector<double> increasing(int n, double lo, double gap_lo, double gap_hi)
{
    std::vector<double> v{lo};
    for (int i = 1; i < n; ++i) v.push_back(v.back() + uniform(gap_lo, gap_hi));
    return v;
}

} // namespace gen
