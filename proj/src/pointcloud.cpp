#include "uqr/pointcloud.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "uqr/error.hpp"

namespace uqr {

PointCloudWrite write_pointcloud(const std::vector<Point>& points, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("io-error", "cannot open " + path.string() + " for writing");
    PointCloudWrite out;
    std::string line;
    char buf[32];
    for (const auto& p : points) {
        if (p.is_infinity()) {
            ++out.dropped_infinite;
            continue;
        }
        line.clear();
        const auto& c = p.coords();
        for (Eigen::Index i = 0; i < c.size(); ++i) {
            if (i > 0) line += ' ';
            std::snprintf(buf, sizeof buf, "%.17g", c[i]);
            line += buf;
        }
        line += '\n';
        os.write(line.data(), static_cast<std::streamsize>(line.size()));
        ++out.written;
    }
    os.flush();
    if (!os) throw Error("io-error", "failed writing " + path.string());
    return out;
}

std::vector<Point> read_pointcloud(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw InvalidParameter("cannot read point cloud " + path.string());
    std::vector<Point> pts;
    std::string line;
    int dim = -1;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<double> v;
        std::string tok;
        while (ls >> tok) {
            try {
                std::size_t used = 0;
                v.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw InvalidParameter("bad number '" + tok + "' on line " + std::to_string(lineno));
            }
        }
        if (v.empty()) continue;
        if (dim == -1) dim = static_cast<int>(v.size());
        if (static_cast<int>(v.size()) != dim)
            throw InvalidParameter("line " + std::to_string(lineno) + " has " + std::to_string(v.size()) +
                                   " coordinates, expected " + std::to_string(dim));
        pts.emplace_back(Eigen::Map<Eigen::VectorXd>(v.data(), dim));
    }
    return pts;
}

}  // namespace uqr
