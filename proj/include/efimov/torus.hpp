#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace efimov {

// Reduces an angle into the fundamental window (-pi, pi]. Idempotent.
double reduce_angle(double x);

// Shortest distance between two angles on the circle of circumference 2*pi.
double circle_distance(double a, double b);

// A point of the 3-torus, components stored in (-pi, pi].
struct TorusPoint {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0;

    TorusPoint() = default;
    TorusPoint(double a, double b, double c);  // reduces on construction

    double operator[](std::size_t i) const { return i == 0 ? c1 : (i == 1 ? c2 : c3); }

    Eigen::Vector3d vec() const { return {c1, c2, c3}; }
    static TorusPoint from_vec(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }

    TorusPoint operator+(const TorusPoint& o) const { return {c1 + o.c1, c2 + o.c2, c3 + o.c3}; }
    TorusPoint operator-(const TorusPoint& o) const { return {c1 - o.c1, c2 - o.c2, c3 - o.c3}; }
    TorusPoint operator-() const { return {-c1, -c2, -c3}; }
};

// Euclidean distance on the torus (per-axis circle distances).
double torus_distance(const TorusPoint& a, const TorusPoint& b);

// Dispersion: epsilon(q) = sum_i (1 - cos(n q_i)), range [0, 6].
double epsilon(const TorusPoint& q, int n);
Eigen::Vector3d epsilon_gradient(const TorusPoint& q, int n);
Eigen::Matrix3d epsilon_hessian(const TorusPoint& q, int n);

// Minimizer set of epsilon: all points whose coordinates are multiples of
// 2*pi/n reduced into (-pi, pi]. Cardinality n^3; epsilon vanishes exactly and
// the Hessian there is n^2 * Identity.
struct LambdaSet {
    int n = 1;
    std::vector<TorusPoint> points;

    // Distinct per-axis coordinate values (the set is a 3-fold tensor power).
    std::vector<double> axis_coordinates() const;
};

LambdaSet lambda_set(int n);

// Distance from q to the nearest point of Lambda(n) (torus metric).
double distance_to_lambda(const TorusPoint& q, int n);

}  // namespace efimov
