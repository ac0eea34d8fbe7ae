#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace logdgla {

// Seeded generator with platform-independent sampling helpers. All
// randomized suites route through this so reports are byte-stable:
// std::mt19937_64 output is pinned by the standard, the distribution
// helpers here avoid the stdlib's unspecified ones.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    int range(int lo, int hi) {  // inclusive bounds
        uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next() % span);
    }

    bool flip() { return (next() & 1) != 0; }

    // k distinct values from {lo..hi}, ascending
    std::vector<int> sample(int lo, int hi, int k) {
        std::vector<int> pool;
        for (int x = lo; x <= hi; ++x) pool.push_back(x);
        for (int i = 0; i < k; ++i) {
            int j = range(i, static_cast<int>(pool.size()) - 1);
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        std::sort(pool.begin(), pool.end());
        return pool;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace logdgla
