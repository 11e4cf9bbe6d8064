#include "efimov/torus.hpp"

#include <algorithm>
#include <cmath>

#include "efimov/errors.hpp"

namespace efimov {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;
}  // namespace

double reduce_angle(double x) {
    // map into (-pi, pi]; remainder gives [-pi, pi] with ties at +-pi
    double r = std::remainder(x, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
}

double circle_distance(double a, double b) {
    return std::abs(std::remainder(a - b, kTwoPi));
}

TorusPoint::TorusPoint(double a, double b, double c)
    : c1(reduce_angle(a)), c2(reduce_angle(b)), c3(reduce_angle(c)) {}

double torus_distance(const TorusPoint& a, const TorusPoint& b) {
    const double d1 = circle_distance(a.c1, b.c1);
    const double d2 = circle_distance(a.c2, b.c2);
    const double d3 = circle_distance(a.c3, b.c3);
    return std::sqrt(d1 * d1 + d2 * d2 + d3 * d3);
}

double epsilon(const TorusPoint& q, int n) {
    const double dn = static_cast<double>(n);
    return (1.0 - std::cos(dn * q.c1)) + (1.0 - std::cos(dn * q.c2)) + (1.0 - std::cos(dn * q.c3));
}

Eigen::Vector3d epsilon_gradient(const TorusPoint& q, int n) {
    const double dn = static_cast<double>(n);
    return {dn * std::sin(dn * q.c1), dn * std::sin(dn * q.c2), dn * std::sin(dn * q.c3)};
}

Eigen::Matrix3d epsilon_hessian(const TorusPoint& q, int n) {
    const double dn = static_cast<double>(n);
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    h(0, 0) = dn * dn * std::cos(dn * q.c1);
    h(1, 1) = dn * dn * std::cos(dn * q.c2);
    h(2, 2) = dn * dn * std::cos(dn * q.c3);
    return h;
}

std::vector<double> lambda_axis_coordinates(int n) {
    // multiples of 2*pi/n reduced into (-pi, pi]: k = ceil(-n/2)+1 .. floor(n/2)
    std::vector<double> coords;
    coords.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        // enumerate k*2pi/n for k = 0..n-1 then reduce; gives each class once
        coords.push_back(reduce_angle(static_cast<double>(k) * kTwoPi / static_cast<double>(n)));
    }
    // canonical order
    std::sort(coords.begin(), coords.end());
    return coords;
}

std::vector<double> LambdaSet::axis_coordinates() const {
    return lambda_axis_coordinates(n);
}

LambdaSet lambda_set(int n) {
    if (n < 1) throw schema_error("lambda_set: n must be >= 1");
    LambdaSet out;
    out.n = n;
    const auto axis = lambda_axis_coordinates(n);
    out.points.reserve(static_cast<std::size_t>(n) * n * n);
    for (double a : axis)
        for (double b : axis)
            for (double c : axis) out.points.push_back(TorusPoint{a, b, c});
    return out;
}

double distance_to_lambda(const TorusPoint& q, int n) {
    // per-axis distance to the nearest multiple of 2*pi/n, independent per axis
    const double step = kTwoPi / static_cast<double>(n);
    auto axis_dist = [step](double x) {
        return std::abs(std::remainder(x, step));
    };
    const double d1 = axis_dist(q.c1);
    const double d2 = axis_dist(q.c2);
    const double d3 = axis_dist(q.c3);
    return std::sqrt(d1 * d1 + d2 * d2 + d3 * d3);
}

}  // namespace efimov
