#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "uqr/error.hpp"
#include "uqr/pointcloud.hpp"

using namespace uqr;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "uqr-pointcloud-test";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("format: %.17g, single spaces, LF, infinity dropped") {
    Eigen::VectorXd a(3), b(3);
    a << 0.1, -2.0, 1e-300;
    b << 1.0 / 3.0, 4.0, 5.5;
    const std::vector<Point> pts{Point(a), Point::infinity(3), Point(b)};
    const auto path = scratch("format.xyz");
    const auto w = write_pointcloud(pts, path);
    CHECK(w.written == 2);
    CHECK(w.dropped_infinite == 1);
    CHECK(slurp(path) == "0.10000000000000001 -2 1e-300\n0.33333333333333331 4 5.5\n");
}

TEST_CASE("round trip is exact and output is byte-identical across writes") {
    Rng rng(81);
    std::vector<Point> pts;
    for (int i = 0; i < 500; ++i) pts.push_back(oracle::random_point(rng, 3, -1e6, 1e6));
    const auto p1 = scratch("a.xyz"), p2 = scratch("b.xyz");
    write_pointcloud(pts, p1);
    write_pointcloud(pts, p2);
    CHECK(slurp(p1) == slurp(p2));
    const auto back = read_pointcloud(p1);
    REQUIRE(back.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(back[i] == pts[i]);
}

TEST_CASE("reader skips comments and rejects ragged rows") {
    const auto path = scratch("mixed.xyz");
    {
        std::ofstream os(path);
        os << "# header\n1 2\n\n3 4  # trailing\n";
    }
    const auto pts = read_pointcloud(path);
    REQUIRE(pts.size() == 2);
    CHECK(pts[1].coords()[0] == 3.0);
    {
        std::ofstream os(path);
        os << "1 2\n3 4 5\n";
    }
    CHECK_THROWS_AS(read_pointcloud(path), InvalidParameter);
    {
        std::ofstream os(path);
        os << "1 x\n";
    }
    CHECK_THROWS_AS(read_pointcloud(path), InvalidParameter);
    CHECK_THROWS_AS(read_pointcloud(scratch("missing.xyz")), InvalidParameter);
}

TEST_CASE("unwritable destination is an io error") {
    try {
        write_pointcloud({}, scratch("no-such-dir") / "x" / "y.xyz");
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.code() == "io-error");
    }
}
