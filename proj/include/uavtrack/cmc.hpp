#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

#include "uavtrack/kalman.hpp"

namespace uavtrack {

/// Inter-frame camera-motion model: x' = linear * x + translation.
struct AffineTransform {
    Eigen::Matrix2d linear = Eigen::Matrix2d::Identity();
    Eigen::Vector2d translation = Eigen::Vector2d::Zero();

    static AffineTransform identity() { return {}; }

    bool valid() const {
        return linear.allFinite() && translation.allFinite() &&
               std::abs(linear.determinant()) > 1e-9;
    }

    Eigen::Vector2d apply(const Eigen::Vector2d& p) const { return linear * p + translation; }

    AffineTransform inverse() const {
        AffineTransform inv;
        inv.linear = linear.inverse();
        inv.translation = -inv.linear * translation;
        return inv;
    }
};

/// Point matched from frame t-1 (prev) to frame t (curr).
struct Correspondence {
    Eigen::Vector2d prev;
    Eigen::Vector2d curr;
};

struct RansacResult {
    AffineTransform transform;
    std::vector<bool> inliers;
};

/// Estimates the affine mapping prev -> curr points by RANSAC over minimal
/// 3-point samples, then refits by least squares on the winning inlier set.
/// Deterministic for a fixed seed. Ties between equal inlier counts go to the
/// hypothesis with lower mean reprojection error, then to the earlier
/// iteration. Throws DegenerateInput when every 3-subset of prev points is
/// collinear (the caller falls back to the identity transform).
RansacResult estimate_affine_ransac(const std::vector<Correspondence>& pairs,
                                    int iterations,
                                    double inlier_thresh,
                                    std::uint64_t seed);

/// Least-squares affine fit on all pairs. Throws DegenerateInput when the
/// prev points are collinear.
AffineTransform fit_affine_lsq(const std::vector<Correspondence>& pairs);

/// Warps a Kalman state into the coordinates of the next frame: every
/// (x, y) component pair of the mean — position, size, and both velocity
/// pairs — is mapped through the linear part, translation is added to the
/// position only, and the covariance is transformed congruently by the
/// block-replicated linear part.
KalmanState warp_state(const KalmanState& state, const AffineTransform& transform);

/// Per-frame global-motion file: rows `frame,a11,a12,tx,a21,a22,ty`,
/// 1-based frame indices. Frames absent from the file mean identity.
std::map<int, AffineTransform> load_gmc(const std::filesystem::path& path);
void write_gmc(const std::filesystem::path& path, const std::map<int, AffineTransform>& transforms);

/// Correspondence file: rows `frame,px,py,cx,cy` (points matched from
/// frame-1 to frame).
std::map<int, std::vector<Correspondence>> load_correspondences(const std::filesystem::path& path);
void write_correspondences(const std::filesystem::path& path,
                           const std::map<int, std::vector<Correspondence>>& pairs);

} // namespace uavtrack
