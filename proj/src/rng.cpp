#include "halab/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace halab {

std::vector<std::int64_t> CounterRng::subset(std::int64_t n, std::int64_t size) {
    if (size < 0 || size > n) throw std::invalid_argument("subset size out of range");
    // partial Fisher-Yates
    std::vector<std::int64_t> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    for (std::int64_t i = 0; i < size; ++i) {
        auto j = i + static_cast<std::int64_t>(uniform(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(size));
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace halab
