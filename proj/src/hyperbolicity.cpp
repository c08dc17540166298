#include "hyperkg/hyperbolicity.hpp"

#include "hyperkg/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace hyperkg::hyperbolicity {

namespace {

void check_index(const DistanceMatrix& d, Eigen::Index i, const char* what) {
    if (i < 0 || i >= d.size()) {
        std::ostringstream os;
        os << what << " index " << i << " out of range [0, " << d.size() << ")";
        throw std::out_of_range(os.str());
    }
}

} // namespace

DistanceMatrix::DistanceMatrix(Eigen::MatrixXd d, std::vector<std::string> labels)
    : d_(std::move(d)), labels_(std::move(labels)) {
    if (d_.rows() != d_.cols()) {
        throw std::invalid_argument("distance matrix must be square");
    }
    if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != d_.rows()) {
        throw std::invalid_argument("label count does not match matrix size");
    }
    if (!d_.allFinite()) {
        throw std::invalid_argument("distance matrix has non-finite entries");
    }
    for (Eigen::Index i = 0; i < d_.rows(); ++i) {
        if (d_(i, i) != 0.0) {
            throw std::invalid_argument("distance matrix diagonal must be zero");
        }
        for (Eigen::Index j = i + 1; j < d_.cols(); ++j) {
            if (d_(i, j) < 0.0) {
                throw std::invalid_argument("distance matrix entries must be >= 0");
            }
            if (d_(i, j) != d_(j, i)) {
                throw std::invalid_argument("distance matrix must be symmetric");
            }
        }
    }
}

double gromov_product(const DistanceMatrix& d, Eigen::Index x, Eigen::Index y,
                      Eigen::Index base) {
    check_index(d, x, "point");
    check_index(d, y, "point");
    check_index(d, base, "base");
    return 0.5 * (d(x, base) + d(y, base) - d(x, y));
}

double delta_fixed_base(const DistanceMatrix& d, Eigen::Index base) {
    const Eigen::Index n = d.size();
    if (n < 3) {
        throw std::invalid_argument("delta_fixed_base needs at least 3 points");
    }
    check_index(d, base, "base");

    // Row-major Gromov matrix so the j-loop below is contiguous.
    std::vector<double> a(static_cast<std::size_t>(n) * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double dib = d(i, base);
        for (Eigen::Index j = 0; j < n; ++j) {
            a[i * n + j] = 0.5 * (dib + d(j, base) - d(i, j));
        }
    }

    double delta = 0.0;
    std::vector<double> row(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        std::fill(row.begin(), row.end(), -std::numeric_limits<double>::infinity());
        const double* ai = a.data() + i * n;
        for (Eigen::Index k = 0; k < n; ++k) {
            const double aik = ai[k];
            const double* ak = a.data() + k * n;
            for (Eigen::Index j = 0; j < n; ++j) {
                row[j] = std::max(row[j], std::min(aik, ak[j]));
            }
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            delta = std::max(delta, row[j] - ai[j]);
        }
    }
    return delta;
}

double delta_bruteforce(const DistanceMatrix& d, Eigen::Index cap) {
    const Eigen::Index n = d.size();
    if (n < 4) {
        throw std::invalid_argument("delta_bruteforce needs at least 4 points");
    }
    if (n > cap) {
        std::ostringstream os;
        os << "delta_bruteforce size " << n << " exceeds cap " << cap;
        throw std::invalid_argument(os.str());
    }

    double delta = 0.0;
    for (Eigen::Index w = 0; w < n; ++w) {
        for (Eigen::Index x = 0; x < n; ++x) {
            const double dxw = d(x, w);
            for (Eigen::Index y = 0; y < n; ++y) {
                const double pxy = 0.5 * (dxw + d(y, w) - d(x, y));
                for (Eigen::Index z = 0; z < n; ++z) {
                    const double pyz = 0.5 * (d(y, w) + d(z, w) - d(y, z));
                    const double pxz = 0.5 * (dxw + d(z, w) - d(x, z));
                    delta = std::max(delta, std::min(pxy, pyz) - pxz);
                }
            }
        }
    }
    return delta;
}

double diameter(const DistanceMatrix& d) {
    if (d.size() < 1) {
        throw std::invalid_argument("diameter of an empty matrix");
    }
    return d.matrix().maxCoeff();
}

double relative_delta(double delta, double diam) {
    if (diam <= 0.0) {
        throw DegenerateSampleError("zero-diameter sample: relative delta undefined");
    }
    return 2.0 * delta / diam;
}

double curvature_from_delta(double delta_rel) {
    if (!(delta_rel > 0.0)) {
        throw std::domain_error(
            "curvature undefined for delta_rel <= 0 (tree-like sample)");
    }
    const double ratio = 0.144 / delta_rel;
    return ratio * ratio;
}

EmbeddingMetricSource::EmbeddingMetricSource(Eigen::MatrixXd rows,
                                             std::vector<std::string> labels)
    : rows_(std::move(rows)), labels_(std::move(labels)) {
    if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != rows_.rows()) {
        throw std::invalid_argument("label count does not match row count");
    }
    if (!rows_.allFinite()) {
        throw std::invalid_argument("embedding rows must be finite");
    }
}

std::vector<Eigen::Index> EmbeddingMetricSource::population() const {
    std::vector<Eigen::Index> all(static_cast<std::size_t>(rows_.rows()));
    std::iota(all.begin(), all.end(), Eigen::Index{0});
    return all;
}

DistanceMatrix EmbeddingMetricSource::matrix_for(
    const std::vector<Eigen::Index>& points) const {
    const Eigen::Index n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    std::vector<std::string> labels;
    if (!labels_.empty()) {
        labels.reserve(points.size());
        for (Eigen::Index p : points) labels.push_back(labels_[static_cast<std::size_t>(p)]);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double dist = (rows_.row(points[i]) - rows_.row(points[j])).norm();
            d(i, j) = dist;
            d(j, i) = dist;
        }
    }
    return DistanceMatrix(std::move(d), std::move(labels));
}

namespace {

std::vector<Eigen::Index> sample_without_replacement(
    const std::vector<Eigen::Index>& population, Eigen::Index count,
    std::mt19937_64& rng) {
    std::vector<Eigen::Index> pool = population;
    // Partial Fisher-Yates: the first `count` slots become the sample.
    for (Eigen::Index i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i),
                                                        pool.size() - 1);
        std::swap(pool[static_cast<std::size_t>(i)], pool[pick(rng)]);
    }
    pool.resize(static_cast<std::size_t>(count));
    return pool;
}

} // namespace

DeltaEstimate estimate(const MetricSource& source, Eigen::Index sample_size,
                       int repeats, std::uint64_t seed) {
    if (sample_size < 4) {
        throw std::invalid_argument("sample_size must be >= 4");
    }
    if (repeats < 1) {
        throw std::invalid_argument("repeats must be >= 1");
    }
    const std::vector<Eigen::Index> population = source.population();
    if (population.size() < 4) {
        throw std::invalid_argument("metric source yields fewer than 4 points");
    }

    DeltaEstimate out;
    out.seed = seed;
    out.sample_truncated =
        static_cast<Eigen::Index>(population.size()) < sample_size;
    out.sample_size = out.sample_truncated
                          ? static_cast<Eigen::Index>(population.size())
                          : sample_size;

    for (int r = 0; r < repeats; ++r) {
        auto rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        const auto points = sample_without_replacement(population, out.sample_size, rng);
        const DistanceMatrix d = source.matrix_for(points);

        RepeatResult rr;
        rr.delta = delta_fixed_base(d, 0);
        rr.diam = diameter(d);
        rr.delta_rel = relative_delta(rr.delta, rr.diam);
        out.repeats.push_back(rr);
    }

    double sum = 0.0;
    for (const auto& rr : out.repeats) sum += rr.delta_rel;
    out.mean = sum / static_cast<double>(out.repeats.size());
    double sq = 0.0;
    for (const auto& rr : out.repeats) {
        const double dev = rr.delta_rel - out.mean;
        sq += dev * dev;
    }
    out.stddev = out.repeats.size() > 1
                     ? std::sqrt(sq / static_cast<double>(out.repeats.size() - 1))
                     : 0.0;
    if (out.mean > 0.0) {
        out.curvature = curvature_from_delta(out.mean);
    }
    return out;
}

nlohmann::ordered_json to_json(const DeltaEstimate& e) {
    nlohmann::ordered_json j;
    auto& rel = j["delta_rel_values"] = nlohmann::ordered_json::array();
    auto diams = nlohmann::ordered_json::array();
    auto deltas = nlohmann::ordered_json::array();
    for (const auto& rr : e.repeats) {
        rel.push_back(rr.delta_rel);
        diams.push_back(rr.diam);
        deltas.push_back(rr.delta);
    }
    j["delta_values"] = std::move(deltas);
    j["diameter_per_repeat"] = std::move(diams);
    j["mean"] = e.mean;
    j["std"] = e.stddev;
    if (e.curvature) {
        j["curvature"] = *e.curvature;
    } else {
        j["curvature"] = nullptr;
        j["curvature_error"] = "delta_rel mean is zero; curvature formula undefined";
    }
    j["seed"] = e.seed;
    j["sample_size"] = e.sample_size;
    j["repeats"] = e.repeats.size();
    j["sample_truncated"] = e.sample_truncated;
    return j;
}

} // namespace hyperkg::hyperbolicity
