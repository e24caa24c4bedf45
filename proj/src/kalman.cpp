#include "uavtrack/kalman.hpp"

#include <cmath>
#include <stdexcept>

namespace uavtrack {

namespace {
constexpr double kMinSize = 1e-3; // px; keeps IoU well-defined downstream
}

KalmanFilter::KalmanFilter(Noise noise) : noise_(noise) {
    motion_ = Eigen::Matrix<double, 8, 8>::Identity();
    motion_.topRightCorner<4, 4>() = Eigen::Matrix4d::Identity(); // dt = 1 frame
    observation_ = Eigen::Matrix<double, 4, 8>::Zero();
    observation_.leftCols<4>() = Eigen::Matrix4d::Identity();
}

Eigen::Matrix<double, 8, 1> KalmanFilter::process_stddev(double height) const {
    Eigen::Matrix<double, 8, 1> std;
    std.head<4>().setConstant(noise_.position_weight * height);
    std.tail<4>().setConstant(noise_.velocity_weight * height);
    return std;
}

KalmanState KalmanFilter::initiate(const BoundingBox& measurement) const {
    if (!measurement.valid() || measurement.w <= 0.0 || measurement.h <= 0.0) {
        throw std::invalid_argument("kalman initiate: measurement must be finite with positive size");
    }
    KalmanState state;
    state.mean << measurement.center_x(), measurement.center_y(), measurement.w, measurement.h,
        0.0, 0.0, 0.0, 0.0;

    const double h = measurement.h;
    Eigen::Matrix<double, 8, 1> std;
    std.head<4>().setConstant(2.0 * noise_.position_weight * h);
    std.tail<4>().setConstant(10.0 * noise_.velocity_weight * h);
    state.covariance = std.array().square().matrix().asDiagonal();
    return state;
}

KalmanState KalmanFilter::predict(const KalmanState& state) const {
    const Eigen::Matrix<double, 8, 1> std = process_stddev(state.mean(3));
    const Eigen::Matrix<double, 8, 8> process_cov =
        std.array().square().matrix().asDiagonal();

    KalmanState out;
    out.mean = motion_ * state.mean;
    out.covariance = motion_ * state.covariance * motion_.transpose() + process_cov;
    return out;
}

std::pair<Eigen::Vector4d, Eigen::Matrix4d> KalmanFilter::project(const KalmanState& state) const {
    const double sigma = noise_.position_weight * state.mean(3);
    const Eigen::Matrix4d measurement_cov =
        Eigen::Vector4d::Constant(sigma * sigma).asDiagonal();

    Eigen::Vector4d mean = observation_ * state.mean;
    Eigen::Matrix4d cov =
        observation_ * state.covariance * observation_.transpose() + measurement_cov;
    return {mean, cov};
}

KalmanState KalmanFilter::update(const KalmanState& state, const BoundingBox& measurement) const {
    if (!measurement.valid()) {
        throw std::invalid_argument("kalman update: invalid measurement");
    }
    auto [projected_mean, projected_cov] = project(state);

    Eigen::LLT<Eigen::Matrix4d> chol(projected_cov);
    if (chol.info() != Eigen::Success) {
        throw std::runtime_error("kalman update: singular innovation covariance");
    }

    // K = P H^T S^-1, solved without forming the inverse.
    const Eigen::Matrix<double, 8, 4> pht = state.covariance * observation_.transpose();
    const Eigen::Matrix<double, 8, 4> gain = chol.solve(pht.transpose()).transpose();

    Eigen::Vector4d z;
    z << measurement.center_x(), measurement.center_y(), measurement.w, measurement.h;
    const Eigen::Vector4d innovation = z - projected_mean;

    KalmanState out;
    out.mean = state.mean + gain * innovation;
    out.covariance = state.covariance - gain * projected_cov * gain.transpose();

    out.mean(2) = std::max(out.mean(2), kMinSize);
    out.mean(3) = std::max(out.mean(3), kMinSize);
    return out;
}

std::vector<double> KalmanFilter::gating_distance(
    const KalmanState& state, const std::vector<BoundingBox>& candidates) const {
    auto [projected_mean, projected_cov] = project(state);

    Eigen::LLT<Eigen::Matrix4d> chol(projected_cov);
    if (chol.info() != Eigen::Success) {
        throw std::runtime_error("kalman gating: singular projected covariance");
    }

    std::vector<double> distances;
    distances.reserve(candidates.size());
    for (const auto& box : candidates) {
        Eigen::Vector4d z;
        z << box.center_x(), box.center_y(), box.w, box.h;
        const Eigen::Vector4d residual = z - projected_mean;
        // d^2 = r^T S^-1 r via the Cholesky factor: solve L y = r, d^2 = |y|^2.
        const Eigen::Vector4d y = chol.matrixL().solve(residual);
        distances.push_back(y.squaredNorm());
    }
    return distances;
}

} // namespace uavtrack
