#pragma once

// Minimal vector-graphic curve rendering (axes + polylines), so figure
// reproduction does not depend on an external plotting stack.

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "loschmidt/curve.hpp"

namespace loschmidt {

struct SvgOptions {
    int width = 760;
    int height = 480;
    int margin = 52;
    std::string title;
};

inline void write_svg(std::ostream& os, const std::vector<FidelityCurve>& curves,
                      const SvgOptions& options = {}) {
    double t_lo = 0.0, t_hi = 1.0, v_lo = 0.0, v_hi = 1.0;
    bool first = true;
    for (const auto& c : curves)
        for (const auto& s : c.samples) {
            if (first) {
                t_lo = t_hi = s.t;
                v_lo = v_hi = s.value;
                first = false;
            }
            t_lo = std::min(t_lo, s.t);
            t_hi = std::max(t_hi, s.t);
            v_lo = std::min(v_lo, s.value);
            v_hi = std::max(v_hi, s.value);
        }
    if (t_hi <= t_lo) t_hi = t_lo + 1.0;
    v_lo = std::min(v_lo, 0.0);
    v_hi = std::max(v_hi, 1.0) * 1.02;

    const int W = options.width, H = options.height, M = options.margin;
    auto px = [&](double t) { return M + (t - t_lo) / (t_hi - t_lo) * (W - 2 * M); };
    auto py = [&](double v) { return H - M - (v - v_lo) / (v_hi - v_lo) * (H - 2 * M); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
       << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!options.title.empty())
        os << "<text x=\"" << W / 2 << "\" y=\"" << M / 2
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
           << options.title << "</text>\n";

    // axes with a few ticks
    os << "<g stroke=\"black\" stroke-width=\"1\">\n";
    os << "<line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M << "\" y2=\""
       << H - M << "\"/>\n";
    os << "<line x1=\"" << M << "\" y1=\"" << M << "\" x2=\"" << M << "\" y2=\"" << H - M
       << "\"/>\n";
    os << "</g>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / 4.0;
        const double v = v_lo + (v_hi - v_lo) * i / 4.0;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", t);
        os << "<text x=\"" << px(t) << "\" y=\"" << H - M + 16
           << "\" text-anchor=\"middle\">" << buf << "</text>\n";
        std::snprintf(buf, sizeof buf, "%.3g", v);
        os << "<text x=\"" << M - 6 << "\" y=\"" << py(v) + 4
           << "\" text-anchor=\"end\">" << buf << "</text>\n";
        os << "<line x1=\"" << px(t) << "\" y1=\"" << H - M << "\" x2=\"" << px(t)
           << "\" y2=\"" << H - M + 4 << "\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << M - 4 << "\" y1=\"" << py(v) << "\" x2=\"" << M
           << "\" y2=\"" << py(v) << "\" stroke=\"black\"/>\n";
    }
    os << "</g>\n";

    static const char* palette[] = {"#1f6fb2", "#c23b22", "#2e8b57", "#8b008b"};
    for (std::size_t k = 0; k < curves.size(); ++k) {
        os << "<polyline fill=\"none\" stroke=\"" << palette[k % 4]
           << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& s : curves[k].samples)
            os << px(s.t) << "," << py(s.value) << " ";
        os << "\"/>\n";
        if (!curves[k].meta.family.empty()) {
            os << "<text x=\"" << W - M << "\" y=\"" << M + 16 * (k + 1)
               << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
               << palette[k % 4] << "\">" << curves[k].meta.family << " eps="
               << (curves[k].meta.epsilon > 0 ? "+1" : "-1") << " g=" << curves[k].meta.g
               << "</text>\n";
        }
    }
    os << "</svg>\n";
}

}  // namespace loschmidt
