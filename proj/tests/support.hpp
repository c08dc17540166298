#pragma once

// Shared helpers for the unit and acceptance suites. The oracles here
// are deliberately written from first principles (exp/log based scalar
// math, naive scans, finite differences) so they stay independent of
// the library code they check.

#include "hyperkg/geometry.hpp"
#include "hyperkg/hyperbolicity.hpp"
#include "hyperkg/knowledge_graph.hpp"
#include "hyperkg/poincare_layer.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

// ---- scalar oracles ----------------------------------------------------

inline double tanh_oracle(double x) {
    const double e2 = std::exp(2.0 * x);
    return (e2 - 1.0) / (e2 + 1.0);
}

inline double artanh_oracle(double x) { return 0.5 * std::log((1.0 + x) / (1.0 - x)); }

inline double sinh_oracle(double x) { return 0.5 * (std::exp(x) - std::exp(-x)); }

inline double asinh_oracle(double x) { return std::log(x + std::sqrt(x * x + 1.0)); }

// ---- random generators ---------------------------------------------------

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index dim,
                                     double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = normal(rng);
    return v;
}

// A point with norm uniform in [0, max_radius_fraction / sqrt(c)).
inline hyperkg::geometry::BallPoint random_ball_point(std::mt19937_64& rng,
                                                      Eigen::Index dim,
                                                      hyperkg::geometry::Curvature c,
                                                      double max_radius_fraction = 0.9) {
    Eigen::VectorXd direction = random_vector(rng, dim);
    const double norm = direction.norm();
    if (norm == 0.0) direction[0] = 1.0;
    direction.normalize();
    std::uniform_real_distribution<double> radius(0.0, max_radius_fraction);
    const double ball_radius = c.hyperbolic() ? 1.0 / c.sqrt() : 1.0;
    return hyperkg::geometry::BallPoint(direction * radius(rng) * ball_radius, c);
}

// ---- delta-hyperbolicity oracles ----------------------------------------

// Direct triple scan of the four-point condition at a fixed base.
inline double delta_triple_scan(const hyperkg::hyperbolicity::DistanceMatrix& d,
                                Eigen::Index base) {
    const Eigen::Index n = d.size();
    double best = 0.0;
    for (Eigen::Index x = 0; x < n; ++x) {
        for (Eigen::Index z = 0; z < n; ++z) {
            double reach = -std::numeric_limits<double>::infinity();
            for (Eigen::Index y = 0; y < n; ++y) {
                const double pxy = hyperkg::hyperbolicity::gromov_product(d, x, y, base);
                const double pyz = hyperkg::hyperbolicity::gromov_product(d, y, z, base);
                reach = std::max(reach, std::min(pxy, pyz));
            }
            best = std::max(best,
                            reach - hyperkg::hyperbolicity::gromov_product(d, x, z, base));
        }
    }
    return best;
}

// Random tree with positive edge weights; returns the path metric.
inline hyperkg::hyperbolicity::DistanceMatrix random_tree_metric(std::mt19937_64& rng,
                                                                 int nodes,
                                                                 bool unit_weights) {
    std::vector<int> parent(static_cast<std::size_t>(nodes), -1);
    std::vector<double> weight(static_cast<std::size_t>(nodes), 0.0);
    std::uniform_real_distribution<double> w(0.1, 3.0);
    for (int v = 1; v < nodes; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        parent[static_cast<std::size_t>(v)] = pick(rng);
        weight[static_cast<std::size_t>(v)] = unit_weights ? 1.0 : w(rng);
    }

    // Distances via per-node root paths: d(u, v) = depth(u) + depth(v)
    // - 2 depth(lca); computed by walking ancestor chains.
    std::vector<double> depth(static_cast<std::size_t>(nodes), 0.0);
    for (int v = 1; v < nodes; ++v) {
        depth[static_cast<std::size_t>(v)] =
            depth[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])] +
            weight[static_cast<std::size_t>(v)];
    }
    const auto ancestors = [&](int v) {
        std::vector<int> chain;
        for (int u = v; u != -1; u = parent[static_cast<std::size_t>(u)]) chain.push_back(u);
        return chain;
    };
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(nodes, nodes);
    for (int u = 0; u < nodes; ++u) {
        const auto chain_u = ancestors(u);
        std::vector<bool> on_u(static_cast<std::size_t>(nodes), false);
        for (const int a : chain_u) on_u[static_cast<std::size_t>(a)] = true;
        for (int v = u + 1; v < nodes; ++v) {
            int lca = v;
            while (!on_u[static_cast<std::size_t>(lca)]) {
                lca = parent[static_cast<std::size_t>(lca)];
            }
            const double dist = depth[static_cast<std::size_t>(u)] +
                                depth[static_cast<std::size_t>(v)] -
                                2.0 * depth[static_cast<std::size_t>(lca)];
            d(u, v) = dist;
            d(v, u) = dist;
        }
    }
    return hyperkg::hyperbolicity::DistanceMatrix(std::move(d));
}

// Euclidean metric over random points: always a true metric.
inline hyperkg::hyperbolicity::DistanceMatrix random_euclidean_metric(std::mt19937_64& rng,
                                                                      int nodes, int dim) {
    Eigen::MatrixXd points(nodes, dim);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < nodes; ++i) {
        for (int j = 0; j < dim; ++j) points(i, j) = normal(rng);
    }
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(nodes, nodes);
    for (int i = 0; i < nodes; ++i) {
        for (int j = i + 1; j < nodes; ++j) {
            const double dist = (points.row(i) - points.row(j)).norm();
            d(i, j) = dist;
            d(j, i) = dist;
        }
    }
    return hyperkg::hyperbolicity::DistanceMatrix(std::move(d));
}

// ---- finite differences ---------------------------------------------------

// Central finite difference of a scalar function of one coordinate.
template <typename F>
double central_difference(F&& f, double h = 1e-5) {
    return (f(h) - f(-h)) / (2.0 * h);
}

inline double gradcheck_rel_error(double analytic, double numeric) {
    const double scale = std::max({1.0, std::abs(analytic), std::abs(numeric)});
    return std::abs(analytic - numeric) / scale;
}

// ---- fixtures -------------------------------------------------------------

// The six-node movie/composer example graph used across kg tests.
inline std::vector<hyperkg::kg::Triple> figure_graph_triples() {
    return {
        {"Cloudburst", "composer", "Eric Whitacre"},
        {"Cloudburst", "director", "Francis Searle"},
        {"Eric Whitacre", "country of citizenship", "American"},
        {"Francis Searle", "date of birth", "14 March 1909"},
        {"Francis Searle", "date of death", "31 July 2002"},
    };
}

// Synthetic MetaQA-flavored fixture with a unique 2-hop evidence path.
inline std::vector<hyperkg::kg::Triple> metaqa_fixture_triples() {
    return {
        {"Joel Zwick", "directed_by_reversed", "My Big Fat Greek Wedding"},
        {"My Big Fat Greek Wedding", "in_language", "Greek"},
        {"My Big Fat Greek Wedding", "directed_by", "Joel Zwick"},
        {"My Big Fat Greek Wedding", "release_year", "2002"},
        {"Nia Vardalos", "written_by_reversed", "My Big Fat Greek Wedding"},
    };
}

} // namespace testsupport
