#include "uavtrack/cmc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "uavtrack/errors.hpp"
#include "uavtrack/rng.hpp"
#include "text_util.hpp"

namespace uavtrack {

namespace {

constexpr double kCollinearEps = 1e-9;

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() * b.y() - a.y() * b.x();
}

bool triple_collinear(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                      const Eigen::Vector2d& c) {
    return std::abs(cross2(b - a, c - a)) < kCollinearEps;
}

bool all_collinear(const std::vector<Correspondence>& pairs) {
    const Eigen::Vector2d& origin = pairs[0].prev;
    Eigen::Vector2d dir = Eigen::Vector2d::Zero();
    for (const auto& p : pairs) {
        dir = p.prev - origin;
        if (dir.squaredNorm() > kCollinearEps * kCollinearEps) break;
    }
    if (dir.squaredNorm() <= kCollinearEps * kCollinearEps) return true; // all coincident
    for (const auto& p : pairs) {
        if (std::abs(cross2(dir, p.prev - origin)) > kCollinearEps) return false;
    }
    return true;
}

/// Least-squares affine over a subset of pairs. The x and y target rows
/// decouple and share one 3x3 normal matrix over [px, py, 1].
AffineTransform fit_affine(const std::vector<Correspondence>& pairs,
                           const std::vector<int>& indices) {
    Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs_x = Eigen::Vector3d::Zero();
    Eigen::Vector3d rhs_y = Eigen::Vector3d::Zero();
    for (int i : indices) {
        const Eigen::Vector3d row(pairs[i].prev.x(), pairs[i].prev.y(), 1.0);
        normal += row * row.transpose();
        rhs_x += row * pairs[i].curr.x();
        rhs_y += row * pairs[i].curr.y();
    }

    Eigen::FullPivLU<Eigen::Matrix3d> lu(normal);
    if (lu.rank() < 3) {
        throw DegenerateInput("affine fit: sample points are collinear");
    }
    const Eigen::Vector3d ux = lu.solve(rhs_x);
    const Eigen::Vector3d uy = lu.solve(rhs_y);

    AffineTransform t;
    t.linear << ux(0), ux(1), uy(0), uy(1);
    t.translation << ux(2), uy(2);
    return t;
}

double reprojection_error(const Correspondence& pair, const AffineTransform& t) {
    return (t.apply(pair.prev) - pair.curr).norm();
}

} // namespace

AffineTransform fit_affine_lsq(const std::vector<Correspondence>& pairs) {
    if (pairs.size() < 3) {
        throw DegenerateInput("affine fit: need at least 3 correspondences");
    }
    std::vector<int> indices(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) indices[i] = static_cast<int>(i);
    return fit_affine(pairs, indices);
}

RansacResult estimate_affine_ransac(const std::vector<Correspondence>& pairs,
                                    int iterations,
                                    double inlier_thresh,
                                    std::uint64_t seed) {
    const int n = static_cast<int>(pairs.size());
    if (n < 3) {
        throw DegenerateInput("ransac: need at least 3 correspondences");
    }
    if (all_collinear(pairs)) {
        throw DegenerateInput("ransac: all source points collinear");
    }

    SplitMix64 rng(seed);
    int best_count = -1;
    double best_mean_err = std::numeric_limits<double>::infinity();
    std::vector<bool> best_mask;

    std::vector<int> sample(3);
    for (int it = 0; it < iterations; ++it) {
        sample[0] = static_cast<int>(rng.next_below(n));
        do {
            sample[1] = static_cast<int>(rng.next_below(n));
        } while (sample[1] == sample[0]);
        do {
            sample[2] = static_cast<int>(rng.next_below(n));
        } while (sample[2] == sample[0] || sample[2] == sample[1]);

        if (triple_collinear(pairs[sample[0]].prev, pairs[sample[1]].prev,
                             pairs[sample[2]].prev)) {
            continue;
        }

        const AffineTransform model = fit_affine(pairs, sample);

        int count = 0;
        double err_sum = 0.0;
        std::vector<bool> mask(n, false);
        for (int i = 0; i < n; ++i) {
            const double err = reprojection_error(pairs[i], model);
            if (err < inlier_thresh) {
                mask[i] = true;
                ++count;
                err_sum += err;
            }
        }
        const double mean_err = count > 0 ? err_sum / count : std::numeric_limits<double>::infinity();

        if (count > best_count || (count == best_count && mean_err < best_mean_err)) {
            best_count = count;
            best_mean_err = mean_err;
            best_mask = std::move(mask);
        }
    }

    if (best_count < 3) {
        // Unlucky sampling; fall back to the first non-collinear triple.
        for (int i = 0; i < n && best_count < 3; ++i) {
            for (int j = i + 1; j < n && best_count < 3; ++j) {
                for (int k = j + 1; k < n && best_count < 3; ++k) {
                    if (triple_collinear(pairs[i].prev, pairs[j].prev, pairs[k].prev)) continue;
                    const AffineTransform model = fit_affine(pairs, {i, j, k});
                    best_mask.assign(n, false);
                    best_count = 0;
                    for (int m = 0; m < n; ++m) {
                        if (reprojection_error(pairs[m], model) < inlier_thresh) {
                            best_mask[m] = true;
                            ++best_count;
                        }
                    }
                }
            }
        }
        if (best_count < 3) {
            throw DegenerateInput("ransac: no non-degenerate inlier set found");
        }
    }

    std::vector<int> inlier_indices;
    for (int i = 0; i < n; ++i) {
        if (best_mask[i]) inlier_indices.push_back(i);
    }
    RansacResult result;
    result.transform = fit_affine(pairs, inlier_indices);
    result.inliers = std::move(best_mask);
    return result;
}

KalmanState warp_state(const KalmanState& state, const AffineTransform& transform) {
    if (!transform.valid()) {
        throw std::invalid_argument("warp_state: invalid affine transform");
    }
    Eigen::Matrix<double, 8, 8> block = Eigen::Matrix<double, 8, 8>::Zero();
    for (int k = 0; k < 4; ++k) {
        block.block<2, 2>(2 * k, 2 * k) = transform.linear;
    }

    KalmanState out;
    out.mean = block * state.mean;
    out.mean.head<2>() += transform.translation;
    out.covariance = block * state.covariance * block.transpose();
    return out;
}

std::map<int, AffineTransform> load_gmc(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path.string(), 0, "cannot open file");
    }

    std::map<int, AffineTransform> transforms;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view trimmed = detail::trim(line);
        if (trimmed.empty()) continue;

        const auto fields = detail::split_fields(trimmed);
        if (fields.size() != 7) {
            throw ParseError(path.string(), line_no,
                             "expected 7 fields (frame,a11,a12,tx,a21,a22,ty), got " +
                                 std::to_string(fields.size()));
        }
        int frame = 0;
        if (!detail::parse_int(fields[0], frame) || frame < 1) {
            throw ParseError(path.string(), line_no, "invalid frame index");
        }
        double v[6];
        for (int i = 0; i < 6; ++i) {
            if (!detail::parse_double(fields[i + 1], v[i]) || !std::isfinite(v[i])) {
                throw ParseError(path.string(), line_no, "invalid transform coefficient");
            }
        }
        AffineTransform t;
        t.linear << v[0], v[1], v[3], v[4];
        t.translation << v[2], v[5];
        if (!transforms.emplace(frame, t).second) {
            throw ParseError(path.string(), line_no,
                             "duplicate frame " + std::to_string(frame));
        }
    }
    return transforms;
}

void write_gmc(const std::filesystem::path& path,
               const std::map<int, AffineTransform>& transforms) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    for (const auto& [frame, t] : transforms) {
        out << frame << ',' << detail::format_number(t.linear(0, 0)) << ','
            << detail::format_number(t.linear(0, 1)) << ','
            << detail::format_number(t.translation(0)) << ','
            << detail::format_number(t.linear(1, 0)) << ','
            << detail::format_number(t.linear(1, 1)) << ','
            << detail::format_number(t.translation(1)) << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

std::map<int, std::vector<Correspondence>> load_correspondences(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path.string(), 0, "cannot open file");
    }

    std::map<int, std::vector<Correspondence>> result;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view trimmed = detail::trim(line);
        if (trimmed.empty()) continue;

        const auto fields = detail::split_fields(trimmed);
        if (fields.size() != 5) {
            throw ParseError(path.string(), line_no,
                             "expected 5 fields (frame,px,py,cx,cy), got " +
                                 std::to_string(fields.size()));
        }
        int frame = 0;
        if (!detail::parse_int(fields[0], frame) || frame < 1) {
            throw ParseError(path.string(), line_no, "invalid frame index");
        }
        double v[4];
        for (int i = 0; i < 4; ++i) {
            if (!detail::parse_double(fields[i + 1], v[i]) || !std::isfinite(v[i])) {
                throw ParseError(path.string(), line_no, "invalid coordinate");
            }
        }
        result[frame].push_back({{v[0], v[1]}, {v[2], v[3]}});
    }
    return result;
}

void write_correspondences(const std::filesystem::path& path,
                           const std::map<int, std::vector<Correspondence>>& pairs) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    for (const auto& [frame, list] : pairs) {
        for (const auto& c : list) {
            out << frame << ',' << detail::format_number(c.prev.x()) << ','
                << detail::format_number(c.prev.y()) << ','
                << detail::format_number(c.curr.x()) << ','
                << detail::format_number(c.curr.y()) << '\n';
        }
    }
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

} // namespace uavtrack
