#pragma once

// Mixed-radix coefficient grid shared by the grid oracle and the
// epsilon-net kernels.

#include <cstddef>
#include <limits>
#include <vector>

#include "orbit/linalg.hpp"

namespace orbit::detail {

struct CoefficientGrid {
    std::vector<std::size_t> half_counts;  // axis i runs over -m_i..m_i
    std::vector<double> steps;             // spacing per axis

    /// Number of grid points, saturating at SIZE_MAX.
    std::size_t size() const {
        std::size_t total = 1;
        for (std::size_t m : half_counts) {
            const std::size_t axis = 2 * m + 1;
            if (total > std::numeric_limits<std::size_t>::max() / axis)
                return std::numeric_limits<std::size_t>::max();
            total *= axis;
        }
        return total;
    }

    void decode(std::size_t index, Vector& coeffs) const {
        for (std::size_t i = 0; i < half_counts.size(); ++i) {
            const std::size_t axis = 2 * half_counts[i] + 1;
            const std::size_t digit = index % axis;
            index /= axis;
            coeffs[i] = (static_cast<double>(digit) - static_cast<double>(half_counts[i])) * steps[i];
        }
    }
};

}  // namespace orbit::detail
