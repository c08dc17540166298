#pragma once

#include <Eigen/Core>

namespace hyperkg::geometry {

// Default distance kept from the ball boundary when re-projecting.
inline constexpr double kBoundaryEps = 1e-5;

// Ball curvature hyperparameter c >= 0. c == 0 selects the Euclidean
// limit of every operation; hyperbolic formulas require c > 0.
class Curvature {
public:
    explicit Curvature(double value);

    double value() const noexcept { return value_; }
    double sqrt() const noexcept { return sqrt_; }
    bool hyperbolic() const noexcept { return value_ > 0.0; }

    friend bool operator==(const Curvature& a, const Curvature& b) noexcept {
        return a.value_ == b.value_;
    }

private:
    double value_;
    double sqrt_;
};

// A point strictly inside the curvature-c Poincare ball: c*||x||^2 < 1.
class BallPoint {
public:
    BallPoint(Eigen::VectorXd coords, Curvature c);

    static BallPoint origin(Eigen::Index dim, Curvature c);

    const Eigen::VectorXd& coords() const noexcept { return coords_; }
    Curvature curvature() const noexcept { return c_; }
    Eigen::Index dim() const noexcept { return coords_.size(); }

private:
    Eigen::VectorXd coords_;
    Curvature c_;
};

// A vector in the tangent space at the origin.
class TangentVector {
public:
    explicit TangentVector(Eigen::VectorXd coords);

    const Eigen::VectorXd& coords() const noexcept { return coords_; }
    Eigen::Index dim() const noexcept { return coords_.size(); }

private:
    Eigen::VectorXd coords_;
};

// lambda_x^c = 2 / (1 - c*||x||^2); >= 2 whenever c > 0.
double conformal_factor(const BallPoint& x);

// Mobius addition x (+)_c y. The result is re-projected inside the
// ball when floating error pushes it onto the boundary. c == 0 reduces
// to componentwise x + y.
BallPoint mobius_add(const BallPoint& x, const BallPoint& y);

// Geodesic distance (2/sqrt(c)) * artanh(sqrt(c) * ||(-x) (+)_c y||).
// c == 0 dispatches to the analytic limit 2*||x - y||.
double distance(const BallPoint& x, const BallPoint& y);

// Exponential map at the origin: tanh(||v||*sqrt(c)) / (||v||*sqrt(c)) * v.
// v = 0 maps to the origin. c == 0 is the identity.
BallPoint exp_map_origin(const TangentVector& v, Curvature c);

// Logarithmic map at the origin, the exact inverse of exp_map_origin.
TangentVector log_map_origin(const BallPoint& y);

// Clamp a raw vector into the ball: unchanged while c*||x||^2 < (1-eps)^2,
// otherwise rescaled to norm (1-eps)/sqrt(c).
BallPoint project_to_ball(const Eigen::VectorXd& raw, Curvature c,
                          double eps = kBoundaryEps);

} // namespace hyperkg::geometry
