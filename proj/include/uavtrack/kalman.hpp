#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "uavtrack/geometry.hpp"

namespace uavtrack {

/// Constant-velocity filter state over [xc, yc, w, h] plus per-component
/// velocities, pixels and pixels/frame.
struct KalmanState {
    Eigen::Matrix<double, 8, 1> mean = Eigen::Matrix<double, 8, 1>::Zero();
    Eigen::Matrix<double, 8, 8> covariance = Eigen::Matrix<double, 8, 8>::Zero();

    /// Top-left + size box of the current mean.
    BoundingBox box() const {
        return {mean(0) - mean(2) / 2.0, mean(1) - mean(3) / 2.0, mean(2), mean(3)};
    }
};

/// Noise standard deviations as fractions of the current box height.
struct KalmanNoise {
    double position_weight = 1.0 / 20.0;
    double velocity_weight = 1.0 / 160.0;
};

/// Kalman filter over box center, width and height with one-frame Euler
/// steps. Process and measurement noise standard deviations scale with the
/// current box height; the weights are the conventional defaults of
/// tracking-by-detection pipelines and both are configurable.
class KalmanFilter {
public:
    using Noise = KalmanNoise;

    /// Chi-square 95th percentile, 4 degrees of freedom. Gating distances
    /// above this mark an association pair as inadmissible.
    static constexpr double kGatingThreshold = 9.4877;

    explicit KalmanFilter(Noise noise = {});

    /// Fresh state centered on the measurement with zero velocities and a
    /// diagonal, size-proportional covariance. Rejects non-finite boxes.
    KalmanState initiate(const BoundingBox& measurement) const;

    /// One constant-velocity step; covariance grows by process noise.
    KalmanState predict(const KalmanState& state) const;

    /// Standard correction toward the measurement in [xc, yc, w, h] space.
    /// Negative posterior sizes are clamped to a small positive value.
    /// Throws std::runtime_error when the innovation covariance is singular.
    KalmanState update(const KalmanState& state, const BoundingBox& measurement) const;

    /// Measurement-space mean and covariance (measurement noise included).
    std::pair<Eigen::Vector4d, Eigen::Matrix4d> project(const KalmanState& state) const;

    /// Squared Mahalanobis distance in measurement space for each candidate.
    std::vector<double> gating_distance(const KalmanState& state,
                                        const std::vector<BoundingBox>& candidates) const;

    const Noise& noise() const { return noise_; }

private:
    Eigen::Matrix<double, 8, 1> process_stddev(double height) const;

    Noise noise_;
    Eigen::Matrix<double, 8, 8> motion_;      // F
    Eigen::Matrix<double, 4, 8> observation_; // H
};

} // namespace uavtrack
