#include <doctest.h>

#include <sstream>
#include <string>

#include "waveguide/errors.hpp"
#include "waveguide/frames.hpp"
#include "waveguide/tube.hpp"

using namespace wg;

namespace {

std::vector<Eigen::VectorXd> interval_points(double a, int n)
{
    std::vector<Eigen::VectorXd> out;
    for (double u : uniform_grid(-a, a, n)) out.push_back(Eigen::VectorXd::Constant(1, u));
    return out;
}

} // namespace

TEST_CASE("straight tube does not overlap itself")
{
    CurvatureProfile p(2, {families::constant(0.0)}, {-50, 50});
    const auto f = build_frame_field(p, uniform_grid(-40, 40, 321));
    const auto cloud = tube_embedding(f, interval_points(1.0, 5), 1.0);
    CHECK(cloud.size() == 321 * 5);
    CHECK(check_self_overlap(cloud, 1.0).no_overlap);
}

TEST_CASE("a long circular strip wraps onto itself")
{
    CurvatureProfile p(2, {families::constant(0.3)}, {-50, 50});
    const auto f = build_frame_field(p, uniform_grid(-40, 40, 321));
    const auto r = check_self_overlap(tube_embedding(f, interval_points(1.0, 5), 1.0), 1.0);
    CHECK_FALSE(r.no_overlap);
    CHECK_FALSE(r.offending.empty());
}

TEST_CASE("coarse sampling is refused")
{
    CurvatureProfile p(2, {families::constant(0.0)}, {-50, 50});
    const auto f = build_frame_field(p, uniform_grid(-40, 40, 41));
    CHECK_THROWS_AS(check_self_overlap(tube_embedding(f, interval_points(1.0, 3), 1.0), 1.0), ResolutionError);
}

TEST_CASE("mesh header names the columns and lists every vertex")
{
    CurvatureProfile p(3, {families::constant(0.3), families::constant(0.2)}, {-50, 50});
    const auto f = build_frame_field(p, uniform_grid(-5, 5, 11));
    std::vector<Eigen::VectorXd> us{Eigen::Vector2d(0, 0), Eigen::Vector2d(0.5, 0), Eigen::Vector2d(0, -0.5)};
    const auto cloud = tube_embedding(f, us, 0.5);
    std::ostringstream out;
    write_mesh(out, cloud);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "# s u2 u3 x1 x2 x3");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 33);
}

TEST_CASE("tube points sit at distance |u| from the curve")
{
    CurvatureProfile p(3, {families::gaussian_bump(0.6, 1.0), families::constant(0.3)}, {-10, 10});
    const auto f = build_frame_field(p, uniform_grid(-4, 4, 81));
    std::vector<Eigen::VectorXd> us{Eigen::Vector2d(0.3, -0.4)};
    const auto cloud = tube_embedding(f, us, 1.0);
    for (std::size_t k = 0; k < cloud.size(); ++k) CHECK((cloud.x[k] - f.point[k]).norm() == doctest::Approx(0.5));
}
