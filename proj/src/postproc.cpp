#include "uavtrack/postproc.hpp"

#include <stdexcept>

namespace uavtrack {

std::vector<Tracklet> interpolate(const std::vector<Tracklet>& tracklets, int max_gap) {
    std::vector<Tracklet> result;
    result.reserve(tracklets.size());

    for (const auto& t : tracklets) {
        Tracklet out;
        out.id = t.id;
        for (std::size_t i = 0; i < t.points.size(); ++i) {
            if (i > 0) {
                const TrackletPoint& a = t.points[i - 1];
                const TrackletPoint& b = t.points[i];
                if (b.frame <= a.frame) {
                    throw std::invalid_argument("tracklet frames must be strictly increasing");
                }
                const int gap = b.frame - a.frame;
                if (gap >= 2 && gap <= max_gap) {
                    for (int f = a.frame + 1; f < b.frame; ++f) {
                        const double s = static_cast<double>(f - a.frame) / gap;
                        TrackletPoint p;
                        p.frame = f;
                        p.box = {a.box.x + s * (b.box.x - a.box.x),
                                 a.box.y + s * (b.box.y - a.box.y),
                                 a.box.w + s * (b.box.w - a.box.w),
                                 a.box.h + s * (b.box.h - a.box.h)};
                        p.score = (a.score + b.score) / 2.0;
                        out.points.push_back(p);
                    }
                }
            }
            out.points.push_back(t.points[i]);
        }
        result.push_back(std::move(out));
    }
    return result;
}

} // namespace uavtrack
