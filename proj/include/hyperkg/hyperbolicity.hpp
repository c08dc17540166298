#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace hyperkg::hyperbolicity {

// Thrown when a sample cannot support the relative-hyperbolicity
// computation (zero diameter).
class DegenerateSampleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Symmetric pairwise-distance table with zero diagonal and finite
// non-negative entries. Optional point labels travel with the matrix.
class DistanceMatrix {
public:
    explicit DistanceMatrix(Eigen::MatrixXd d, std::vector<std::string> labels = {});

    Eigen::Index size() const noexcept { return d_.rows(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return d_(i, j); }
    const Eigen::MatrixXd& matrix() const noexcept { return d_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

private:
    Eigen::MatrixXd d_;
    std::vector<std::string> labels_;
};

// (x, y)_base = (d(x,base) + d(y,base) - d(x,y)) / 2.
double gromov_product(const DistanceMatrix& d, Eigen::Index x, Eigen::Index y,
                      Eigen::Index base);

// Smallest delta satisfying the four-point condition for all triples at
// a fixed base point, via the max-min matrix product over the Gromov
// matrix A: max_{i,j} ((A (x) A)_{ij} - A_{ij}). O(N^3).
double delta_fixed_base(const DistanceMatrix& d, Eigen::Index base);

// Exhaustive O(N^4) scan over all quadruples. Guarded by a size cap;
// intended as an oracle for small matrices.
double delta_bruteforce(const DistanceMatrix& d, Eigen::Index cap = 64);

// Maximum pairwise distance.
double diameter(const DistanceMatrix& d);

// 2 * delta / diam, in [0, 1]. Throws DegenerateSampleError when diam == 0.
double relative_delta(double delta, double diam);

// c(X) = (0.144 / delta_rel)^2. Throws std::domain_error for delta_rel <= 0.
double curvature_from_delta(double delta_rel);

// A population of points with a metric over them. matrix_for() must
// yield finite distances for any subset of population().
class MetricSource {
public:
    virtual ~MetricSource() = default;

    // Indices eligible for sampling.
    virtual std::vector<Eigen::Index> population() const = 0;
    virtual DistanceMatrix matrix_for(const std::vector<Eigen::Index>& points) const = 0;
};

// Euclidean distances between rows of an embedding matrix.
class EmbeddingMetricSource final : public MetricSource {
public:
    explicit EmbeddingMetricSource(Eigen::MatrixXd rows, std::vector<std::string> labels = {});

    std::vector<Eigen::Index> population() const override;
    DistanceMatrix matrix_for(const std::vector<Eigen::Index>& points) const override;

private:
    Eigen::MatrixXd rows_;
    std::vector<std::string> labels_;
};

struct RepeatResult {
    double delta = 0.0;
    double diam = 0.0;
    double delta_rel = 0.0;
};

struct DeltaEstimate {
    std::vector<RepeatResult> repeats;
    double mean = 0.0;
    double stddev = 0.0;
    // Unset when mean == 0 (perfectly tree-like sample).
    std::optional<double> curvature;
    std::uint64_t seed = 0;
    Eigen::Index sample_size = 0;
    bool sample_truncated = false;
};

// Batched estimation: per repeat, draw `sample_size` points uniformly
// without replacement (sub-seed derive_seed(seed, repeat)), build the
// distance matrix, and evaluate delta_fixed_base at index 0. When the
// population is smaller than sample_size every point is used and
// sample_truncated is set.
DeltaEstimate estimate(const MetricSource& source, Eigen::Index sample_size = 1500,
                       int repeats = 5, std::uint64_t seed = 0);

nlohmann::ordered_json to_json(const DeltaEstimate& e);

} // namespace hyperkg::hyperbolicity
