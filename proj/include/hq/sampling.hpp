#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "hq/errors.hpp"

namespace hq {

/// Low-discrepancy Halton point generator on (0,1)^dim with prime bases.
/// Deterministic for a fixed (dim, seed); the seed offsets the start index.
class HaltonSampler {
public:
    explicit HaltonSampler(int dim, std::uint64_t seed = 0);

    [[nodiscard]] Eigen::VectorXd next();

    [[nodiscard]] int dim() const { return dim_; }

private:
    int dim_;
    std::uint64_t index_;
};

}  // namespace hq
