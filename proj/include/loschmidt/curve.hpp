#pragma once

// Sampled fidelity curves and their on-disk format: comma-delimited rows
// under a '#'-prefixed self-describing header. The header carries enough
// to reproduce every row (mode constants, grid, method, seed); values are
// printed with 17 significant digits so a re-run round-trips bit-for-bit.

#include <array>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace loschmidt {

struct CurveSample {
    double t;
    double value;
    double error;
};

struct CurveMeta {
    std::string family;        // "quantum" | "classical"
    int epsilon = 1;
    double g = 0.0;
    std::string distribution;  // "none" | "gaussian scale=..." | "ball radius=..."
    std::string method;        // "exact" | "quadrature" | "monte-carlo"
    std::array<double, 4> mode{1.0, 0.0, 0.0, 1.0};
    std::string grid;          // "start:end:count"
    std::uint64_t seed = 0;
    std::size_t mc_samples = 0;
};

struct FidelityCurve {
    CurveMeta meta;
    std::vector<CurveSample> samples;
};

namespace detail {
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace detail

inline void write_curve(std::ostream& os, const FidelityCurve& curve) {
    const CurveMeta& m = curve.meta;
    os << "# loschmidt-curve v1\n";
    os << "# family: " << m.family << "\n";
    os << "# epsilon: " << (m.epsilon > 0 ? "+1" : "-1") << "\n";
    os << "# g: " << detail::fmt17(m.g) << "\n";
    os << "# distribution: " << m.distribution << "\n";
    os << "# method: " << m.method << "\n";
    os << "# mode: " << detail::fmt17(m.mode[0]) << "," << detail::fmt17(m.mode[1])
       << "," << detail::fmt17(m.mode[2]) << "," << detail::fmt17(m.mode[3]) << "\n";
    os << "# grid: " << m.grid << "\n";
    os << "# seed: " << m.seed << "\n";
    os << "# samples: " << m.mc_samples << "\n";
    os << "t,value,error\n";
    for (const CurveSample& s : curve.samples)
        os << detail::fmt17(s.t) << "," << detail::fmt17(s.value) << ","
           << detail::fmt17(s.error) << "\n";
}

inline FidelityCurve read_curve(std::istream& is) {
    FidelityCurve curve;
    std::map<std::string, std::string> header;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            if (colon != std::string::npos) {
                std::string key = line.substr(1, colon - 1);
                std::string val = line.substr(colon + 1);
                auto trim = [](std::string& s) {
                    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
                    while (!s.empty() && s.back() == ' ') s.pop_back();
                };
                trim(key);
                trim(val);
                header[key] = val;
            }
            continue;
        }
        if (line.rfind("t,", 0) == 0) continue;  // column header
        CurveSample s{};
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &s.t, &s.value, &s.error) != 3)
            throw std::runtime_error("read_curve: malformed row: " + line);
        curve.samples.push_back(s);
    }
    CurveMeta& m = curve.meta;
    if (header.count("family")) m.family = header["family"];
    if (header.count("epsilon")) m.epsilon = header["epsilon"] == "-1" ? -1 : 1;
    if (header.count("g")) m.g = std::stod(header["g"]);
    if (header.count("distribution")) m.distribution = header["distribution"];
    if (header.count("method")) m.method = header["method"];
    if (header.count("grid")) m.grid = header["grid"];
    if (header.count("seed")) m.seed = std::stoull(header["seed"]);
    if (header.count("samples")) m.mc_samples = std::stoull(header["samples"]);
    if (header.count("mode")) {
        std::istringstream ss(header["mode"]);
        std::string part;
        for (int i = 0; i < 4 && std::getline(ss, part, ','); ++i)
            m.mode[i] = std::stod(part);
    }
    return curve;
}

}  // namespace loschmidt
