#pragma once

#include <algorithm>
#include <cmath>

namespace monocube {

/// Neumaier-compensated running sum.
template <typename Scalar = double>
class CompensatedSum {
public:
    void add(Scalar x) noexcept {
        const Scalar t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(Scalar x) noexcept {
        add(x);
        return *this;
    }
    Scalar value() const noexcept { return sum_ + comp_; }

private:
    Scalar sum_{0};
    Scalar comp_{0};
};

/// |a - b| / max(|reference|, floor).
template <typename Scalar>
Scalar relative_difference(Scalar a, Scalar b, Scalar reference, Scalar floor) {
    return std::abs(a - b) / std::max(std::abs(reference), floor);
}

}  // namespace monocube
