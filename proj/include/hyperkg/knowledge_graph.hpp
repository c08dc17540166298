#pragma once

#include "hyperkg/hyperbolicity.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hyperkg::kg {

// One (head, relation, tail) edge. All fields nonempty after trimming.
struct Triple {
    std::string head;
    std::string relation;
    std::string tail;

    friend bool operator==(const Triple&, const Triple&) = default;
};

enum class TripleFormat { tsv, jsonl };

struct TripleParseError {
    std::size_t line = 0;
    std::string message;
};

struct TripleLoadResult {
    std::vector<Triple> triples;   // deduplicated, input order
    std::size_t duplicates = 0;
    std::vector<TripleParseError> errors;  // lenient mode only
};

// Parse tab-separated "head<TAB>relation<TAB>tail" lines or JSON lines
// {"h":..., "r":..., "t":...}. Strict mode throws on the first malformed
// line; lenient mode skips it and records the error.
TripleLoadResult load_triples(std::istream& in, TripleFormat format,
                              bool strict = false);

// Directed labeled multigraph over interned entity and relation names.
// Duplicate (head, relation, tail) edges collapse to one.
class KnowledgeGraph {
public:
    struct Edge {
        std::int32_t relation;
        std::int32_t target;
    };

    static KnowledgeGraph from_triples(const std::vector<Triple>& triples);

    std::size_t entity_count() const noexcept { return entity_names_.size(); }
    std::size_t relation_count() const noexcept { return relation_names_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    std::optional<std::int32_t> entity_id(const std::string& name) const;
    std::optional<std::int32_t> relation_id(const std::string& name) const;
    const std::string& entity_name(std::int32_t id) const { return entity_names_.at(id); }
    const std::string& relation_name(std::int32_t id) const { return relation_names_.at(id); }

    const std::vector<Edge>& out_edges(std::int32_t entity) const {
        return adjacency_.at(static_cast<std::size_t>(entity));
    }

    bool has_edge(const std::string& head, const std::string& relation,
                  const std::string& tail) const;

    // Tails t of edges (head, relation, t).
    std::vector<std::int32_t> targets(std::int32_t head, std::int32_t relation) const;

    // Entity ids of the largest connected component of the undirected
    // view. Ties break toward the component containing the smallest id.
    std::vector<std::int32_t> largest_component() const;

private:
    std::vector<std::string> entity_names_;
    std::vector<std::string> relation_names_;
    std::unordered_map<std::string, std::int32_t> entity_ids_;
    std::unordered_map<std::string, std::int32_t> relation_ids_;
    std::vector<std::vector<Edge>> adjacency_;
    std::size_t edge_count_ = 0;

    std::int32_t intern_entity(const std::string& name);
    std::int32_t intern_relation(const std::string& name);
};

// Alternating entity/relation token sequence e1, r1, e2, ..., e_n.
// `truncated` marks walks cut short by a dead end.
struct Walk {
    std::vector<std::string> tokens;
    bool truncated = false;

    std::size_t hops() const noexcept { return tokens.size() / 2; }
    friend bool operator==(const Walk&, const Walk&) = default;
};

// True when tokens alternate entity/relation and every consecutive
// (e, r, e') is an edge of the graph.
bool walk_is_valid(const Walk& walk, const KnowledgeGraph& graph);

// Uniform random walk following out-edges. A node without out-edges
// ends the walk early with `truncated` set.
Walk random_walk(const KnowledgeGraph& graph, const std::string& start, int hops,
                 std::mt19937_64& rng);

struct QuestionRecord {
    std::string id;
    std::string question;
    std::string source;
    std::vector<std::string> relations;
    std::string answer;
    std::optional<std::vector<std::string>> evidence;  // full alternating chain
};

// JSON lines {"id","question","source","relations":[...],"answer"}
// with optional "evidence": [...].
std::vector<QuestionRecord> load_question_records(std::istream& in);

struct SubgraphResult {
    std::vector<Triple> triples;          // exactly the evidence-path edges
    std::vector<std::string> failed_ids;  // questions with no complete path
};

// Evidence-path edges of the given questions. Questions carrying an
// explicit evidence chain contribute its edges (each must exist in the
// graph); otherwise every intermediate completing
// (source, r1, m) -> (m, r2, answer) contributes its two edges.
SubgraphResult extract_question_subgraph(const KnowledgeGraph& graph,
                                         const std::vector<QuestionRecord>& questions);

struct HoppingExample {
    std::vector<std::string> input;   // e1, r1, ..., rn
    std::vector<std::string> target;  // full walk tokens
};

enum class ExclusionMode { exact_sequence, subpath };

struct HoppingBuildResult {
    std::vector<HoppingExample> examples;
    std::size_t excluded = 0;
};

// Drop every walk matching the held-out set (exact token-sequence
// equality by default; subpath mode also drops walks containing a
// held-out walk as a contiguous entity-aligned subsequence), then pair
// each survivor with its intermediate-free input sequence.
HoppingBuildResult build_hopping_examples(const KnowledgeGraph& graph,
                                          const std::vector<Walk>& walks,
                                          const std::vector<Walk>& heldout,
                                          ExclusionMode mode = ExclusionMode::exact_sequence);

struct ParsingExample {
    std::string question;
    std::vector<std::string> target;  // source, r1, ..., rn
};

// Pair each question with its incomplete sequence. Records whose
// relation-path length differs from `hops` are rejected.
std::vector<ParsingExample> build_parsing_examples(
    const std::vector<QuestionRecord>& questions, std::size_t hops = 2);

// Serialize a token sequence for prompt-style presentation.
std::string join_tokens(const std::vector<std::string>& tokens,
                        const std::string& separator = "; ");

// Out-degree -> fraction of nodes, over all nodes. Fractions sum to 1.
std::map<std::size_t, double> out_degree_histogram(const KnowledgeGraph& graph);

// MetaQA-style record carrying a type-path string such as
// "director_to_movie_to_language".
struct MetaQaRecord {
    std::string id;
    std::string question;
    std::string source;
    std::string path;
    std::string answer;
};

// JSON lines {"id","question","source","path","answer"}.
std::vector<MetaQaRecord> load_metaqa_records(std::istream& in);

// (type, type) -> relation lookup table.
class PairRelationMap {
public:
    static PairRelationMap builtin_metaqa();
    // Tab-separated rows "head_type<TAB>tail_type<TAB>relation".
    static PairRelationMap load(std::istream& in);

    std::optional<std::string> lookup(const std::string& a, const std::string& b) const;
    std::size_t size() const noexcept { return map_.size(); }

private:
    std::map<std::pair<std::string, std::string>, std::string> map_;
};

enum class EvidenceStatus {
    ok,
    hop_mismatch,       // path string hop count != expected
    unknown_pair,       // a type pair missing from the mapping
    missing_entity,     // source or answer absent from the graph
    no_intermediate,    // no entity completes the chain
    ambiguous,          // several entities complete the chain
};

struct EvidenceResult {
    EvidenceStatus status = EvidenceStatus::ok;
    std::optional<Walk> chain;            // set when status == ok
    std::vector<std::string> candidates;  // set when status == ambiguous
    std::string message;
};

// Resolve a MetaQA record into its full evidence chain
// (source, r1, intermediate, r2, answer) using the pair->relation map
// and the graph. Ambiguous intermediates are reported, not chosen.
EvidenceResult metaqa_evidence(const MetaQaRecord& record, const KnowledgeGraph& graph,
                               const PairRelationMap& mapping, std::size_t hops = 2);

struct ShortestPathResult {
    Eigen::MatrixXd distances;  // +inf across components
    std::vector<std::string> labels;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> unreachable;

    bool connected() const noexcept { return unreachable.empty(); }
    // Throws std::domain_error when any pair is unreachable.
    hyperbolicity::DistanceMatrix distance_matrix() const;
};

// BFS distances between the named nodes, treating every edge as
// undirected with unit weight. Paths may pass through nodes outside
// the subset. Disconnected pairs are flagged, not errors.
ShortestPathResult shortest_path_matrix(const KnowledgeGraph& graph,
                                        const std::vector<std::string>& nodes);

// Shortest-path metric over the largest connected component, for
// delta-hyperbolicity estimation.
class GraphMetricSource final : public hyperbolicity::MetricSource {
public:
    explicit GraphMetricSource(const KnowledgeGraph& graph);

    std::vector<Eigen::Index> population() const override;
    hyperbolicity::DistanceMatrix matrix_for(
        const std::vector<Eigen::Index>& points) const override;

private:
    const KnowledgeGraph& graph_;
    std::vector<std::vector<std::int32_t>> undirected_;
    std::vector<std::int32_t> component_;
};

} // namespace hyperkg::kg
