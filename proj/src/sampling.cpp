#include "hq/sampling.hpp"

namespace hq {

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                           31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
constexpr int kMaxDim = static_cast<int>(sizeof(kPrimes) / sizeof(kPrimes[0]));

double radical_inverse(std::uint64_t i, int base) {
    double inv = 1.0 / base, result = 0.0, frac = inv;
    while (i > 0) {
        result += static_cast<double>(i % base) * frac;
        i /= base;
        frac *= inv;
    }
    return result;
}

}  // namespace

HaltonSampler::HaltonSampler(int dim, std::uint64_t seed) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim)
        throw InvalidInputError("HaltonSampler: dimension out of range");
    index_ = 1 + seed * 7919;  // prime stride keeps distinct seeds apart
}

Eigen::VectorXd HaltonSampler::next() {
    Eigen::VectorXd out(dim_);
    for (int d = 0; d < dim_; ++d) out[d] = radical_inverse(index_, kPrimes[d]);
    ++index_;
    return out;
}

}  // namespace hq
