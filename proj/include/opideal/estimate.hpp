#pragma once
// Certified interval for a norm value.

#include <algorithm>
#include <limits>
#include <string>

namespace opideal {

enum class EstimateStatus { converged, unconverged };

struct NormEstimate {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    EstimateStatus status = EstimateStatus::unconverged;

    static NormEstimate exact(double v) { return {v, v, EstimateStatus::converged}; }

    double midpoint() const { return 0.5 * (lower + upper); }
    double width() const { return upper - lower; }

    /// (upper - lower) / upper, 0 for the zero estimate.
    double relative_gap() const {
        if (upper <= 0.0) return 0.0;
        return (upper - lower) / upper;
    }

    bool converged() const { return status == EstimateStatus::converged; }

    /// Tighten with an independent estimate of the same quantity.
    void merge(const NormEstimate& other) {
        lower = std::max(lower, other.lower);
        upper = std::min(upper, other.upper);
        if (other.status == EstimateStatus::unconverged) status = EstimateStatus::unconverged;
    }

    bool overlaps(const NormEstimate& other, double tol = 0.0) const {
        return lower <= other.upper + tol && other.lower <= upper + tol;
    }
};

inline std::string to_string(EstimateStatus s) {
    return s == EstimateStatus::converged ? "converged" : "unconverged";
}

}  // namespace opideal
