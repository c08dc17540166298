#include "hyperkg/geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hyperkg::geometry {

namespace {

void require_finite(const Eigen::VectorXd& v, const char* what) {
    if (!v.allFinite()) {
        throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
    }
}

void require_same_frame(const BallPoint& x, const BallPoint& y) {
    if (x.dim() != y.dim()) {
        std::ostringstream os;
        os << "dimension mismatch: " << x.dim() << " vs " << y.dim();
        throw std::invalid_argument(os.str());
    }
    if (!(x.curvature() == y.curvature())) {
        throw std::invalid_argument("curvature mismatch between ball points");
    }
}

} // namespace

Curvature::Curvature(double value) : value_(value), sqrt_(0.0) {
    if (!std::isfinite(value) || value < 0.0) {
        throw std::invalid_argument("curvature must be finite and >= 0");
    }
    sqrt_ = std::sqrt(value);
}

BallPoint::BallPoint(Eigen::VectorXd coords, Curvature c)
    : coords_(std::move(coords)), c_(c) {
    require_finite(coords_, "ball point");
    if (c_.hyperbolic() && c_.value() * coords_.squaredNorm() >= 1.0) {
        throw std::domain_error("point lies on or outside the Poincare ball");
    }
}

BallPoint BallPoint::origin(Eigen::Index dim, Curvature c) {
    return BallPoint(Eigen::VectorXd::Zero(dim), c);
}

TangentVector::TangentVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
    require_finite(coords_, "tangent vector");
}

double conformal_factor(const BallPoint& x) {
    const double denom = 1.0 - x.curvature().value() * x.coords().squaredNorm();
    if (denom <= 0.0) {
        throw std::domain_error("conformal factor undefined at or beyond the boundary");
    }
    return 2.0 / denom;
}

BallPoint mobius_add(const BallPoint& x, const BallPoint& y) {
    require_same_frame(x, y);
    const double c = x.curvature().value();
    const Eigen::VectorXd& xv = x.coords();
    const Eigen::VectorXd& yv = y.coords();

    if (c == 0.0) {
        return BallPoint(xv + yv, x.curvature());
    }

    const double xy = xv.dot(yv);
    const double x2 = xv.squaredNorm();
    const double y2 = yv.squaredNorm();
    const double denom = 1.0 + 2.0 * c * xy + c * c * x2 * y2;
    if (denom <= 0.0) {
        throw std::domain_error("Mobius addition denominator <= 0; inputs not in ball");
    }
    Eigen::VectorXd num = (1.0 + 2.0 * c * xy + c * y2) * xv + (1.0 - c * x2) * yv;
    return project_to_ball(num / denom, x.curvature());
}

double distance(const BallPoint& x, const BallPoint& y) {
    require_same_frame(x, y);
    const Curvature c = x.curvature();
    if (!c.hyperbolic()) {
        return 2.0 * (x.coords() - y.coords()).norm();
    }
    const BallPoint neg_x(-x.coords(), c);
    const BallPoint sum = mobius_add(neg_x, y);
    const double arg = c.sqrt() * sum.coords().norm();
    if (arg >= 1.0) {
        throw std::domain_error("distance argument reached the ball boundary");
    }
    return 2.0 / c.sqrt() * std::atanh(arg);
}

BallPoint exp_map_origin(const TangentVector& v, Curvature c) {
    if (!c.hyperbolic()) {
        return BallPoint(v.coords(), c);
    }
    const double norm = v.coords().norm();
    if (norm == 0.0) {
        return BallPoint::origin(v.dim(), c);
    }
    const double t = norm * c.sqrt();
    const double scale = std::tanh(t) / t;
    return project_to_ball(scale * v.coords(), c);
}

TangentVector log_map_origin(const BallPoint& y) {
    const Curvature c = y.curvature();
    if (!c.hyperbolic()) {
        return TangentVector(y.coords());
    }
    const double norm = y.coords().norm();
    if (norm == 0.0) {
        return TangentVector(Eigen::VectorXd::Zero(y.dim()));
    }
    const double t = norm * c.sqrt();
    if (t >= 1.0) {
        throw std::domain_error("log map undefined at or beyond the boundary");
    }
    const double scale = std::atanh(t) / t;
    return TangentVector(scale * y.coords());
}

BallPoint project_to_ball(const Eigen::VectorXd& raw, Curvature c, double eps) {
    require_finite(raw, "projection input");
    if (!c.hyperbolic()) {
        return BallPoint(raw, c);
    }
    const double max_norm = (1.0 - eps) / c.sqrt();
    const double norm = raw.norm();
    if (norm <= max_norm) {
        return BallPoint(raw, c);
    }
    return BallPoint(raw * (max_norm / norm), c);
}

} // namespace hyperkg::geometry
