#pragma once

#include <cstddef>
#include <span>

namespace inof {

// Kahan-compensated accumulation of term(i) for i in [begin, end).
template <typename F>
double compensated_sum(std::size_t begin, std::size_t end, F&& term) {
    double sum = 0.0, c = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        const double y = static_cast<double>(term(i)) - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

inline double kahan_sum(std::span<const double> values) {
    return compensated_sum(0, values.size(), [&](std::size_t i) { return values[i]; });
}

}  // namespace inof
