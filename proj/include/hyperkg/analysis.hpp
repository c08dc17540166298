#pragma once

#include "hyperkg/geometry.hpp"
#include "hyperkg/hyperbolicity.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hyperkg::analysis {

// SQuAD-style answer normalization: lowercase, strip punctuation, drop
// the articles a/an/the as whole words, collapse whitespace.
std::string normalize_answer(std::string_view text);

struct PredictionRecord {
    std::string id;
    std::string prediction;
    std::string gold;
};

// JSON lines {"id","prediction","gold"}.
std::vector<PredictionRecord> load_prediction_records(std::istream& in);

// Exact-match percentage after normalization. Duplicate ids and empty
// inputs are rejected.
double em_score(const std::vector<PredictionRecord>& records);

enum class EmbeddingFormat { text, jsonl };

// Named embedding rows. Text format: header "N n", then N rows
// "name v1 ... vn" (the final n fields are the numbers, everything
// before them is the name, so names may contain spaces). JSONL format:
// {"name": ..., "vector": [...]}.
class EmbeddingTable {
public:
    EmbeddingTable(std::vector<std::string> names, Eigen::MatrixXd vectors);

    static EmbeddingTable load(std::istream& in, EmbeddingFormat format);
    void save(std::ostream& out) const;

    Eigen::Index size() const noexcept { return vectors_.rows(); }
    Eigen::Index dim() const noexcept { return vectors_.cols(); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const Eigen::MatrixXd& vectors() const noexcept { return vectors_; }

    bool contains(const std::string& name) const;
    Eigen::VectorXd vector(const std::string& name) const;

private:
    std::vector<std::string> names_;
    Eigen::MatrixXd vectors_;
    std::unordered_map<std::string, Eigen::Index> index_;
};

// (source entity, relation) name pairs, one list per hop position.
struct HopPairs {
    std::vector<std::pair<std::string, std::string>> hop1;
    std::vector<std::pair<std::string, std::string>> hop2;
};

struct DistanceComparisonResult {
    double hop1_pct = 0.0;
    double hop2_pct = 0.0;
    std::size_t n_pairs = 0;
};

// Per hop: percentage of pairs whose geodesic distance between the
// hyperbolic embeddings (mapped into the ball unless already_in_ball)
// strictly exceeds the Euclidean distance between the Euclidean
// embeddings. Ties count as "not larger".
DistanceComparisonResult distance_comparison(const EmbeddingTable& hyperbolic,
                                             const EmbeddingTable& euclidean,
                                             const HopPairs& pairs, geometry::Curvature c,
                                             bool already_in_ball = false);

// Layer curvature initialization from an estimate's mean delta_rel.
geometry::Curvature curvature_init_policy(const hyperbolicity::DeltaEstimate& estimate);

} // namespace hyperkg::analysis
