#include "hyperkg/poincare_layer.hpp"

#include "hyperkg/random.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace hyperkg::layer {

namespace {

// Per-logit intermediates shared by forward and both backward paths.
struct LogitCache {
    double lambda = 0.0;           // conformal factor at x
    Eigen::VectorXd row_norms;     // ||z_k||
    Eigen::MatrixXd unit_rows;     // z_k / ||z_k||
    Eigen::VectorXd projections;   // <x, z_k/||z_k||>
    Eigen::VectorXd cosh_bias;     // cosh(2 sqrt(c) r_k)
    Eigen::VectorXd sinh_bias;     // sinh(2 sqrt(c) r_k)
    Eigen::VectorXd asinh_arg;     // argument of asinh
    Eigen::VectorXd logits;        // v_k
};

void check_input(const geometry::BallPoint& x, const PoincareLinearParams& params) {
    if (x.dim() != params.input_dim()) {
        std::ostringstream os;
        os << "input dimension " << x.dim() << " does not match layer input dimension "
           << params.input_dim();
        throw std::invalid_argument(os.str());
    }
    if (!(x.curvature() == params.curvature())) {
        throw std::invalid_argument("input curvature does not match layer curvature");
    }
    if (!params.curvature().hyperbolic()) {
        throw std::domain_error("Poincare layer requires curvature c > 0");
    }
}

LogitCache compute_logits(const geometry::BallPoint& x, const PoincareLinearParams& params) {
    check_input(x, params);
    const double s = params.curvature().sqrt();
    const Eigen::Index m = params.output_dim();

    LogitCache cache;
    cache.lambda = geometry::conformal_factor(x);
    cache.row_norms = params.weights().rowwise().norm();
    cache.unit_rows = params.weights();
    for (Eigen::Index k = 0; k < m; ++k) {
        cache.unit_rows.row(k) /= cache.row_norms[k];
    }
    cache.projections = cache.unit_rows * x.coords();
    cache.cosh_bias.resize(m);
    cache.sinh_bias.resize(m);
    cache.asinh_arg.resize(m);
    cache.logits.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const double two_sr = 2.0 * s * params.biases()[k];
        cache.cosh_bias[k] = std::cosh(two_sr);
        cache.sinh_bias[k] = std::sinh(two_sr);
        cache.asinh_arg[k] = cache.lambda * s * cache.projections[k] * cache.cosh_bias[k] -
                             (cache.lambda - 1.0) * cache.sinh_bias[k];
        cache.logits[k] = 2.0 / s * cache.row_norms[k] * std::asinh(cache.asinh_arg[k]);
    }
    return cache;
}

// Gradients of sum_k d_logits[k] * v_k(x) through the MLR formula.
LayerGradients gradients_from_logits(const geometry::BallPoint& x,
                                     const PoincareLinearParams& params,
                                     const LogitCache& cache,
                                     const Eigen::VectorXd& d_logits) {
    const double c = params.curvature().value();
    const double s = params.curvature().sqrt();
    const Eigen::Index m = params.output_dim();
    const Eigen::Index n = params.input_dim();

    LayerGradients grads;
    grads.d_input = Eigen::VectorXd::Zero(n);
    grads.d_weights = Eigen::MatrixXd::Zero(m, n);
    grads.d_biases = Eigen::VectorXd::Zero(m);

    for (Eigen::Index k = 0; k < m; ++k) {
        const double vbar = d_logits[k];
        if (vbar == 0.0) continue;
        const double norm_k = cache.row_norms[k];
        const double arg = cache.asinh_arg[k];
        const double inv_sqrt = 1.0 / std::sqrt(1.0 + arg * arg);
        const double abar = vbar * 2.0 / s * norm_k * inv_sqrt;
        const auto unit = cache.unit_rows.row(k).transpose();

        // d a_k / d r_k
        grads.d_biases[k] = abar * 2.0 * s *
                            (cache.lambda * s * cache.projections[k] * cache.sinh_bias[k] -
                             (cache.lambda - 1.0) * cache.cosh_bias[k]);

        // d a_k / d x: through lambda(x) and through the projection.
        const double dlambda_coeff =
            c * cache.lambda * cache.lambda *
            (s * cache.projections[k] * cache.cosh_bias[k] - cache.sinh_bias[k]);
        grads.d_input += abar * (dlambda_coeff * x.coords() +
                                 cache.lambda * s * cache.cosh_bias[k] * unit);

        // d v_k / d z_k: the norm factor and the direction inside <x, u_k>.
        grads.d_weights.row(k) =
            vbar * 2.0 / s *
            (std::asinh(arg) * unit +
             inv_sqrt * cache.lambda * s * cache.cosh_bias[k] *
                 (x.coords() - cache.projections[k] * unit))
                .transpose();
    }
    return grads;
}

struct OutputCache {
    Eigen::VectorXd w;
    double denom = 0.0;  // 1 + sqrt(1 + c ||w||^2) (or paper-literal form)
    double root = 0.0;   // sqrt term
};

OutputCache compute_output(const Eigen::VectorXd& logits, double c, double s,
                           OutputDenominator mode) {
    OutputCache out;
    out.w.resize(logits.size());
    for (Eigen::Index k = 0; k < logits.size(); ++k) {
        const double t = s * logits[k];
        if (std::abs(t) > kSinhSafeBound) {
            std::ostringstream os;
            os << "logit " << k << " outside the sinh-safe range: |sqrt(c)*v| = "
               << std::abs(t) << " > " << kSinhSafeBound;
            throw std::overflow_error(os.str());
        }
        out.w[k] = std::sinh(t) / s;
    }
    const double arg = mode == OutputDenominator::squared ? out.w.squaredNorm() : out.w.norm();
    out.root = std::sqrt(1.0 + c * arg);
    out.denom = 1.0 + out.root;
    return out;
}

} // namespace

PoincareLinearParams::PoincareLinearParams(Eigen::MatrixXd weights, Eigen::VectorXd biases,
                                           geometry::Curvature c)
    : weights_(std::move(weights)), biases_(std::move(biases)), c_(c) {
    if (weights_.rows() < 1 || weights_.cols() < 1) {
        throw std::invalid_argument("layer needs m >= 1 and n >= 1");
    }
    if (biases_.size() != weights_.rows()) {
        throw std::invalid_argument("bias count does not match weight row count");
    }
    if (!weights_.allFinite() || !biases_.allFinite()) {
        throw std::invalid_argument("layer parameters must be finite");
    }
    for (Eigen::Index k = 0; k < weights_.rows(); ++k) {
        if (weights_.row(k).norm() == 0.0) {
            throw std::invalid_argument("weight row " + std::to_string(k) + " is zero");
        }
    }
}

PoincareLinearParams PoincareLinearParams::random_init(Eigen::Index m, Eigen::Index n,
                                                       geometry::Curvature c,
                                                       std::uint64_t seed) {
    auto rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(n)));
    Eigen::MatrixXd weights(m, n);
    for (Eigen::Index k = 0; k < m; ++k) {
        do {
            for (Eigen::Index j = 0; j < n; ++j) weights(k, j) = normal(rng);
        } while (weights.row(k).norm() == 0.0);
    }
    return PoincareLinearParams(std::move(weights), Eigen::VectorXd::Zero(m), c);
}

void PoincareLinearParams::save(std::ostream& out) const {
    out.precision(17);
    out << "poincare-linear 1\n";
    out << output_dim() << ' ' << input_dim() << ' ' << c_.value() << '\n';
    for (Eigen::Index k = 0; k < output_dim(); ++k) {
        for (Eigen::Index j = 0; j < input_dim(); ++j) {
            if (j > 0) out << ' ';
            out << weights_(k, j);
        }
        out << '\n';
    }
    for (Eigen::Index k = 0; k < output_dim(); ++k) {
        if (k > 0) out << ' ';
        out << biases_[k];
    }
    out << '\n';
}

PoincareLinearParams PoincareLinearParams::load(std::istream& in) {
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (!in || magic != "poincare-linear" || version != 1) {
        throw std::runtime_error("not a poincare-linear parameter record");
    }
    Eigen::Index m = 0, n = 0;
    double c = 0.0;
    in >> m >> n >> c;
    if (!in || m < 1 || n < 1) {
        throw std::runtime_error("invalid parameter record header");
    }
    Eigen::MatrixXd weights(m, n);
    for (Eigen::Index k = 0; k < m; ++k) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!(in >> weights(k, j))) {
                throw std::runtime_error("truncated weight matrix in parameter record");
            }
        }
    }
    Eigen::VectorXd biases(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        if (!(in >> biases[k])) {
            throw std::runtime_error("truncated bias vector in parameter record");
        }
    }
    return PoincareLinearParams(std::move(weights), std::move(biases),
                                geometry::Curvature(c));
}

double mlr_logit(const geometry::BallPoint& x, const Eigen::VectorXd& z, double r,
                 geometry::Curvature c) {
    if (!c.hyperbolic()) {
        throw std::domain_error("mlr_logit requires curvature c > 0");
    }
    if (z.size() != x.dim()) {
        throw std::invalid_argument("weight vector dimension does not match point");
    }
    const double norm = z.norm();
    if (norm == 0.0) {
        throw std::invalid_argument("weight vector must be nonzero");
    }
    if (!(x.curvature() == c)) {
        throw std::invalid_argument("point curvature does not match layer curvature");
    }
    const double s = c.sqrt();
    const double lambda = geometry::conformal_factor(x);
    const double projection = x.coords().dot(z) / norm;
    const double arg = lambda * s * projection * std::cosh(2.0 * s * r) -
                       (lambda - 1.0) * std::sinh(2.0 * s * r);
    return 2.0 / s * norm * std::asinh(arg);
}

Eigen::VectorXd mlr_logits(const geometry::BallPoint& x, const PoincareLinearParams& params) {
    return compute_logits(x, params).logits;
}

geometry::BallPoint forward(const geometry::BallPoint& x, const PoincareLinearParams& params,
                            OutputDenominator mode) {
    const auto cache = compute_logits(x, params);
    const double c = params.curvature().value();
    const auto out = compute_output(cache.logits, c, params.curvature().sqrt(), mode);
    const Eigen::VectorXd y = out.w / out.denom;
    if (mode == OutputDenominator::paper_literal) {
        // The literal form can land outside the ball; clamp like any
        // other ball-valued result.
        return geometry::project_to_ball(y, params.curvature());
    }
    return geometry::BallPoint(y, params.curvature());
}

LayerGradients backward(const geometry::BallPoint& x, const PoincareLinearParams& params,
                        const Eigen::VectorXd& upstream, OutputDenominator mode) {
    if (upstream.size() != params.output_dim()) {
        throw std::invalid_argument("upstream dimension does not match layer output");
    }
    const auto cache = compute_logits(x, params);
    const double c = params.curvature().value();
    const double s = params.curvature().sqrt();
    const auto out = compute_output(cache.logits, c, s, mode);

    // dL/dw_k for L = <upstream, w / denom(w)>.
    const double gw = upstream.dot(out.w);
    Eigen::VectorXd d_w(out.w.size());
    if (mode == OutputDenominator::squared) {
        for (Eigen::Index k = 0; k < out.w.size(); ++k) {
            const double d_denom = c * out.w[k] / out.root;
            d_w[k] = upstream[k] / out.denom - gw * d_denom / (out.denom * out.denom);
        }
    } else {
        const double wnorm = out.w.norm();
        if (wnorm == 0.0) {
            throw std::domain_error(
                "paper-literal denominator is not differentiable at w = 0");
        }
        for (Eigen::Index k = 0; k < out.w.size(); ++k) {
            const double d_denom = c * out.w[k] / (2.0 * out.root * wnorm);
            d_w[k] = upstream[k] / out.denom - gw * d_denom / (out.denom * out.denom);
        }
    }

    // dw_k/dv_k = cosh(sqrt(c) v_k).
    Eigen::VectorXd d_logits(out.w.size());
    for (Eigen::Index k = 0; k < out.w.size(); ++k) {
        d_logits[k] = d_w[k] * std::cosh(s * cache.logits[k]);
    }
    return gradients_from_logits(x, params, cache, d_logits);
}

std::vector<Eigen::VectorXd> sequence_transform(const std::vector<Eigen::VectorXd>& inputs,
                                                const PoincareLinearParams& params,
                                                double eps, OutputDenominator mode) {
    std::vector<Eigen::VectorXd> outputs;
    outputs.reserve(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        try {
            const geometry::TangentVector v(inputs[i]);
            const auto mapped = geometry::exp_map_origin(v, params.curvature());
            const auto clamped =
                geometry::project_to_ball(mapped.coords(), params.curvature(), eps);
            const auto transformed = forward(clamped, params, mode);
            outputs.push_back(geometry::log_map_origin(transformed).coords());
        } catch (const std::exception& e) {
            throw SequenceTransformError(i, e.what());
        }
    }
    return outputs;
}

namespace {

struct LossGrads {
    double loss = 0.0;
    Eigen::MatrixXd d_weights;
    Eigen::VectorXd d_biases;
};

// Mean softmax cross-entropy over the logits, with parameter gradients.
LossGrads cross_entropy_pass(const std::vector<geometry::BallPoint>& points,
                             const std::vector<int>& labels,
                             const PoincareLinearParams& params, bool want_grads) {
    const Eigen::Index m = params.output_dim();
    LossGrads out;
    out.d_weights = Eigen::MatrixXd::Zero(m, params.input_dim());
    out.d_biases = Eigen::VectorXd::Zero(m);
    const double inv_n = 1.0 / static_cast<double>(points.size());

    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto cache = compute_logits(points[i], params);
        const double max_logit = cache.logits.maxCoeff();
        const Eigen::VectorXd shifted = (cache.logits.array() - max_logit).exp();
        const double z = shifted.sum();
        out.loss += inv_n * (std::log(z) - (cache.logits[labels[i]] - max_logit));
        if (!want_grads) continue;
        Eigen::VectorXd d_logits = shifted / z;
        d_logits[labels[i]] -= 1.0;
        d_logits *= inv_n;
        const auto grads = gradients_from_logits(points[i], params, cache, d_logits);
        out.d_weights += grads.d_weights;
        out.d_biases += grads.d_biases;
    }
    return out;
}

} // namespace

TrainResult train_toy(const std::vector<TrainSample>& dataset,
                      const PoincareLinearParams& start, int steps, double learning_rate) {
    if (dataset.empty()) {
        throw std::invalid_argument("training dataset is empty");
    }
    if (steps < 0) {
        throw std::invalid_argument("steps must be >= 0");
    }
    std::vector<geometry::BallPoint> points;
    std::vector<int> labels;
    points.reserve(dataset.size());
    labels.reserve(dataset.size());
    for (const auto& sample : dataset) {
        if (sample.label < 0 || sample.label >= start.output_dim()) {
            throw std::invalid_argument("label " + std::to_string(sample.label) +
                                        " outside [0, m)");
        }
        const auto mapped =
            geometry::exp_map_origin(geometry::TangentVector(sample.tangent),
                                     start.curvature());
        points.push_back(geometry::project_to_ball(mapped.coords(), start.curvature()));
        labels.push_back(sample.label);
    }

    Eigen::MatrixXd weights = start.weights();
    Eigen::VectorXd biases = start.biases();
    TrainResult result{start, {}, 0.0};
    result.loss_trace.reserve(static_cast<std::size_t>(steps));

    for (int step = 0; step < steps; ++step) {
        PoincareLinearParams current(weights, biases, start.curvature());
        const auto pass = cross_entropy_pass(points, labels, current, true);
        if (!std::isfinite(pass.loss)) {
            throw std::runtime_error("training diverged: non-finite loss at step " +
                                     std::to_string(step));
        }
        result.loss_trace.push_back(pass.loss);
        weights -= learning_rate * pass.d_weights;
        biases -= learning_rate * pass.d_biases;
    }

    result.params = PoincareLinearParams(std::move(weights), std::move(biases),
                                         start.curvature());
    result.final_loss =
        cross_entropy_pass(points, labels, result.params, false).loss;
    if (!std::isfinite(result.final_loss)) {
        throw std::runtime_error("training diverged: non-finite final loss");
    }
    return result;
}

double classification_accuracy(const std::vector<TrainSample>& dataset,
                               const PoincareLinearParams& params) {
    if (dataset.empty()) {
        throw std::invalid_argument("dataset is empty");
    }
    std::size_t correct = 0;
    for (const auto& sample : dataset) {
        const auto mapped = geometry::exp_map_origin(
            geometry::TangentVector(sample.tangent), params.curvature());
        const auto point =
            geometry::project_to_ball(mapped.coords(), params.curvature());
        const auto logits = mlr_logits(point, params);
        Eigen::Index best = 0;
        logits.maxCoeff(&best);
        if (static_cast<int>(best) == sample.label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

} // namespace hyperkg::layer
