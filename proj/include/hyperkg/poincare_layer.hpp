#pragma once

#include "hyperkg/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace hyperkg::layer {

// Largest |sqrt(c) * v_k| fed to sinh before the layer reports overflow.
inline constexpr double kSinhSafeBound = 350.0;

// The paper-literal denominator uses ||w|| where the default uses
// ||w||^2; only the squared form keeps outputs inside the ball.
enum class OutputDenominator { squared, paper_literal };

// Weight directions z_k (rows) and scalar biases r_k of the Poincare
// linear layer. Immutable after construction; zero rows are rejected.
class PoincareLinearParams {
public:
    PoincareLinearParams(Eigen::MatrixXd weights, Eigen::VectorXd biases,
                         geometry::Curvature c);

    Eigen::Index output_dim() const noexcept { return weights_.rows(); }
    Eigen::Index input_dim() const noexcept { return weights_.cols(); }
    const Eigen::MatrixXd& weights() const noexcept { return weights_; }
    const Eigen::VectorXd& biases() const noexcept { return biases_; }
    geometry::Curvature curvature() const noexcept { return c_; }

    // Zero-mean normal weights scaled by 1/sqrt(n), zero biases.
    static PoincareLinearParams random_init(Eigen::Index m, Eigen::Index n,
                                            geometry::Curvature c, std::uint64_t seed);

    // Self-describing text record {m, n, c, Z row-major, r}; exact
    // round-trip at full double precision.
    void save(std::ostream& out) const;
    static PoincareLinearParams load(std::istream& in);

private:
    Eigen::MatrixXd weights_;
    Eigen::VectorXd biases_;
    geometry::Curvature c_;
};

struct LayerGradients {
    Eigen::VectorXd d_input;    // n
    Eigen::MatrixXd d_weights;  // m x n
    Eigen::VectorXd d_biases;   // m
};

// Hyperbolic multinomial-logistic-regression logit
// v_k(x) = (2/sqrt(c)) ||z|| asinh(lambda_x sqrt(c) <x, z/||z||> cosh(2 sqrt(c) r)
//                                  - (lambda_x - 1) sinh(2 sqrt(c) r)).
double mlr_logit(const geometry::BallPoint& x, const Eigen::VectorXd& z, double r,
                 geometry::Curvature c);

// All m logits of the layer.
Eigen::VectorXd mlr_logits(const geometry::BallPoint& x, const PoincareLinearParams& params);

// Layer output: w_k = sinh(sqrt(c) v_k) / sqrt(c), then
// y = w / (1 + sqrt(1 + c ||w||^2)). Throws std::overflow_error when a
// logit leaves the sinh-safe range.
geometry::BallPoint forward(const geometry::BallPoint& x, const PoincareLinearParams& params,
                            OutputDenominator mode = OutputDenominator::squared);

// Gradients of <upstream, forward(x)> with respect to x, Z and r.
LayerGradients backward(const geometry::BallPoint& x, const PoincareLinearParams& params,
                        const Eigen::VectorXd& upstream,
                        OutputDenominator mode = OutputDenominator::squared);

class SequenceTransformError : public std::runtime_error {
public:
    SequenceTransformError(std::size_t index, const std::string& what)
        : std::runtime_error("sequence position " + std::to_string(index) + ": " + what),
          index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

// Euclidean-in / Euclidean-out pipeline around the layer:
// exp-map -> ball projection -> forward -> log-map, per position.
std::vector<Eigen::VectorXd> sequence_transform(
    const std::vector<Eigen::VectorXd>& inputs, const PoincareLinearParams& params,
    double eps = geometry::kBoundaryEps,
    OutputDenominator mode = OutputDenominator::squared);

// A labeled tangent-space vector; label indexes the layer's output
// classes, 0-based.
struct TrainSample {
    Eigen::VectorXd tangent;
    int label = 0;
};

struct TrainResult {
    PoincareLinearParams params;
    std::vector<double> loss_trace;  // loss before each step
    double final_loss = 0.0;         // loss after the last step
};

// Full-batch gradient descent on softmax cross-entropy over the layer
// logits. Throws std::runtime_error if the loss leaves the finite range.
TrainResult train_toy(const std::vector<TrainSample>& dataset,
                      const PoincareLinearParams& start, int steps, double learning_rate);

// Fraction of samples whose argmax logit equals the label.
double classification_accuracy(const std::vector<TrainSample>& dataset,
                               const PoincareLinearParams& params);

} // namespace hyperkg::layer
