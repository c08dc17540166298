// hyperkg: command-line surface over the geometry, layer, hyperbolicity,
// knowledge-graph and analysis modules. Every command emits JSON or CSV
// with the seed recorded, writes files atomically, and keeps a stable
// exit-code contract: 0 success, 1 internal error, 2 input error,
// 3 check failure / degenerate data.

#include "hyperkg/analysis.hpp"
#include "hyperkg/geometry.hpp"
#include "hyperkg/hyperbolicity.hpp"
#include "hyperkg/knowledge_graph.hpp"
#include "hyperkg/poincare_layer.hpp"
#include "hyperkg/random.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace hyperkg;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitCheck = 3;

class CheckFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open input file: " + path);
    }
    return in;
}

// Write through a temp file in the same directory, then rename.
void write_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open output file: " + tmp.string());
        }
        out << content;
        if (!out) {
            throw std::runtime_error("failed writing output file: " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

void emit_summary(const ordered_json& summary) {
    std::cout << summary.dump() << "\n";
}

kg::TripleFormat parse_triple_format(const std::string& format) {
    if (format == "tsv") return kg::TripleFormat::tsv;
    if (format == "jsonl") return kg::TripleFormat::jsonl;
    throw std::runtime_error("unknown triples format: " + format);
}

analysis::EmbeddingFormat parse_embedding_format(const std::string& format) {
    if (format == "text") return analysis::EmbeddingFormat::text;
    if (format == "jsonl") return analysis::EmbeddingFormat::jsonl;
    throw std::runtime_error("unknown embedding format: " + format);
}

kg::KnowledgeGraph load_graph(const std::string& path, const std::string& format,
                              bool strict) {
    auto in = open_input(path);
    const auto loaded = kg::load_triples(in, parse_triple_format(format), strict);
    for (const auto& err : loaded.errors) {
        std::cerr << "warning: " << path << " line " << err.line << ": " << err.message
                  << "\n";
    }
    return kg::KnowledgeGraph::from_triples(loaded.triples);
}

std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

// ---- delta -----------------------------------------------------------------

struct DeltaOptions {
    std::string input;
    std::string output;
    std::string metric = "graph";
    std::string format;
    std::uint64_t seed = 0;
    Eigen::Index sample_size = 1500;
    int repeats = 5;
    bool strict = false;
};

int cmd_delta(const DeltaOptions& opt) {
    std::unique_ptr<hyperbolicity::MetricSource> source;
    kg::KnowledgeGraph graph;  // keeps the graph alive for the source
    if (opt.metric == "graph") {
        const auto format = opt.format.empty() ? "tsv" : opt.format;
        graph = load_graph(opt.input, format, opt.strict);
        if (graph.entity_count() == 0) {
            throw std::runtime_error("triples file produced an empty graph");
        }
        source = std::make_unique<kg::GraphMetricSource>(graph);
    } else if (opt.metric == "embedding") {
        const auto format = opt.format.empty() ? "text" : opt.format;
        auto in = open_input(opt.input);
        auto table = analysis::EmbeddingTable::load(in, parse_embedding_format(format));
        source = std::make_unique<hyperbolicity::EmbeddingMetricSource>(table.vectors(),
                                                                        table.names());
    } else {
        throw std::runtime_error("unknown metric: " + opt.metric +
                                 " (expected graph or embedding)");
    }

    const auto estimate =
        hyperbolicity::estimate(*source, opt.sample_size, opt.repeats, opt.seed);
    auto j = hyperbolicity::to_json(estimate);
    j["metric"] = opt.metric;
    write_atomic(opt.output, j.dump(2) + "\n");

    ordered_json summary;
    summary["command"] = "delta";
    summary["seed"] = opt.seed;
    summary["mean_delta_rel"] = estimate.mean;
    summary["output"] = opt.output;
    emit_summary(summary);
    return kExitOk;
}

// ---- walks -----------------------------------------------------------------

struct WalksOptions {
    std::string input;
    std::string output;
    std::string format = "tsv";
    std::string heldout;
    std::string start;
    std::string exclusion = "exact";
    std::uint64_t seed = 0;
    int hops = 2;
    std::int64_t num_walks = -1;
    bool strict = false;
};

std::vector<kg::Walk> load_heldout_walks(const std::string& path) {
    std::vector<kg::Walk> walks;
    auto in = open_input(path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                     ": invalid JSON object");
        }
        const char* key = j.contains("walk") ? "walk" : "target";
        if (!j.contains(key) || !j[key].is_array()) {
            throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                     ": expected a \"walk\" or \"target\" array");
        }
        kg::Walk walk;
        for (const auto& token : j[key]) {
            if (!token.is_string()) {
                throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                         ": non-string walk token");
            }
            walk.tokens.push_back(token.get<std::string>());
        }
        walks.push_back(std::move(walk));
    }
    return walks;
}

int cmd_walks(const WalksOptions& opt) {
    const auto graph = load_graph(opt.input, opt.format, opt.strict);
    if (graph.entity_count() == 0) {
        throw std::runtime_error("triples file produced an empty graph");
    }
    if (!opt.start.empty() && !graph.entity_id(opt.start)) {
        throw std::runtime_error("start entity not in graph: " + opt.start);
    }
    const auto mode = [&] {
        if (opt.exclusion == "exact") return kg::ExclusionMode::exact_sequence;
        if (opt.exclusion == "subpath") return kg::ExclusionMode::subpath;
        throw std::runtime_error("unknown exclusion mode: " + opt.exclusion);
    }();

    std::vector<kg::Walk> heldout;
    if (!opt.heldout.empty()) {
        heldout = load_heldout_walks(opt.heldout);
    }

    const auto entity_total = static_cast<std::int64_t>(graph.entity_count());
    const auto num_walks = opt.num_walks < 0 ? entity_total : opt.num_walks;
    std::vector<kg::Walk> walks;
    walks.reserve(static_cast<std::size_t>(num_walks));
    std::size_t short_walks = 0;
    for (std::int64_t i = 0; i < num_walks; ++i) {
        auto rng = make_rng(derive_seed(opt.seed, static_cast<std::uint64_t>(i)));
        std::string start = opt.start;
        if (start.empty()) {
            std::uniform_int_distribution<std::int64_t> pick(0, entity_total - 1);
            start = graph.entity_name(static_cast<std::int32_t>(pick(rng)));
        }
        auto walk = kg::random_walk(graph, start, opt.hops, rng);
        if (walk.truncated) ++short_walks;
        walks.push_back(std::move(walk));
    }

    const auto built = kg::build_hopping_examples(graph, walks, heldout, mode);

    // Pair each retained example with its source walk, in order.
    std::ostringstream lines;
    std::size_t example_index = 0;
    for (const auto& walk : walks) {
        if (example_index >= built.examples.size()) break;
        const auto& example = built.examples[example_index];
        if (example.target != walk.tokens) continue;  // excluded walk
        ordered_json line;
        line["walk"] = walk.tokens;
        line["short"] = walk.truncated;
        line["input"] = example.input;
        line["target"] = example.target;
        lines << line.dump() << "\n";
        ++example_index;
    }
    write_atomic(opt.output, lines.str());

    ordered_json summary;
    summary["command"] = "walks";
    summary["seed"] = opt.seed;
    summary["walks_generated"] = walks.size();
    summary["examples_emitted"] = built.examples.size();
    summary["excluded"] = built.excluded;
    summary["short_walks"] = short_walks;
    summary["output"] = opt.output;
    emit_summary(summary);
    return kExitOk;
}

// ---- degree ----------------------------------------------------------------

struct DegreeOptions {
    std::string input;
    std::string output;
    std::string format = "tsv";
    bool strict = false;
};

int cmd_degree(const DegreeOptions& opt) {
    const auto graph = load_graph(opt.input, opt.format, opt.strict);
    if (graph.entity_count() == 0) {
        throw std::runtime_error("triples file produced an empty graph");
    }
    const auto histogram = kg::out_degree_histogram(graph);

    std::ostringstream csv;
    csv << "out_degree,proportion\n";
    for (const auto& [degree, proportion] : histogram) {
        csv << degree << ',' << format_double(proportion) << "\n";
    }
    write_atomic(opt.output, csv.str());

    ordered_json summary;
    summary["command"] = "degree";
    summary["seed"] = 0;
    summary["nodes"] = graph.entity_count();
    summary["distinct_degrees"] = histogram.size();
    summary["output"] = opt.output;
    emit_summary(summary);
    return kExitOk;
}

// ---- evidence ----------------------------------------------------------------

struct EvidenceOptions {
    std::string input;
    std::string triples;
    std::string mapping;
    std::string output;
    std::string errors;
    std::string format = "tsv";
    int hops = 2;
    bool strict = false;
};

const char* evidence_status_name(kg::EvidenceStatus status) {
    switch (status) {
        case kg::EvidenceStatus::ok: return "ok";
        case kg::EvidenceStatus::hop_mismatch: return "hop_mismatch";
        case kg::EvidenceStatus::unknown_pair: return "unknown_pair";
        case kg::EvidenceStatus::missing_entity: return "missing_entity";
        case kg::EvidenceStatus::no_intermediate: return "no_intermediate";
        case kg::EvidenceStatus::ambiguous: return "ambiguous";
    }
    return "unknown";
}

int cmd_evidence(const EvidenceOptions& opt) {
    const auto graph = load_graph(opt.triples, opt.format, opt.strict);
    const auto mapping = [&] {
        if (opt.mapping.empty()) return kg::PairRelationMap::builtin_metaqa();
        auto in = open_input(opt.mapping);
        return kg::PairRelationMap::load(in);
    }();

    auto in = open_input(opt.input);
    const auto records = kg::load_metaqa_records(in);

    std::ostringstream chains;
    std::ostringstream failures;
    std::size_t failed = 0;
    for (const auto& record : records) {
        const auto result = kg::metaqa_evidence(record, graph, mapping,
                                                static_cast<std::size_t>(opt.hops));
        if (result.status == kg::EvidenceStatus::ok) {
            ordered_json line;
            line["id"] = record.id;
            line["chain"] = result.chain->tokens;
            chains << line.dump() << "\n";
        } else {
            ++failed;
            ordered_json line;
            line["id"] = record.id;
            line["status"] = evidence_status_name(result.status);
            line["message"] = result.message;
            if (!result.candidates.empty()) {
                line["candidates"] = result.candidates;
            }
            failures << line.dump() << "\n";
        }
    }

    write_atomic(opt.output, chains.str());
    const std::string sidecar =
        opt.errors.empty() ? opt.output + ".errors.jsonl" : opt.errors;
    write_atomic(sidecar, failures.str());

    ordered_json summary;
    summary["command"] = "evidence";
    summary["seed"] = 0;
    summary["records"] = records.size();
    summary["resolved"] = records.size() - failed;
    summary["failed"] = failed;
    summary["output"] = opt.output;
    summary["errors_file"] = sidecar;
    emit_summary(summary);
    return kExitOk;
}

// ---- distances -----------------------------------------------------------

struct DistancesOptions {
    std::string hyperbolic;
    std::string euclidean;
    std::string pairs;
    std::string output;
    std::string csv;
    std::string embedding_format = "text";
    double curvature = 1.0;
    bool in_ball = false;
};

int cmd_distances(const DistancesOptions& opt) {
    const auto format = parse_embedding_format(opt.embedding_format);
    auto hyp_in = open_input(opt.hyperbolic);
    const auto hyp = analysis::EmbeddingTable::load(hyp_in, format);
    auto euc_in = open_input(opt.euclidean);
    const auto euc = analysis::EmbeddingTable::load(euc_in, format);

    auto pairs_in = open_input(opt.pairs);
    const auto records = kg::load_question_records(pairs_in);
    analysis::HopPairs pairs;
    for (const auto& record : records) {
        if (record.relations.size() < 2) {
            throw std::runtime_error("question " + record.id +
                                     " needs two relations for the hop comparison");
        }
        pairs.hop1.emplace_back(record.source, record.relations[0]);
        pairs.hop2.emplace_back(record.source, record.relations[1]);
    }

    const auto result = analysis::distance_comparison(
        hyp, euc, pairs, geometry::Curvature(opt.curvature), opt.in_ball);

    ordered_json j;
    j["hop1_pct"] = result.hop1_pct;
    j["hop2_pct"] = result.hop2_pct;
    j["n_pairs"] = result.n_pairs;
    write_atomic(opt.output, j.dump(2) + "\n");

    if (!opt.csv.empty()) {
        std::ostringstream csv;
        csv << "hop,percentage\n";
        csv << "1," << format_double(result.hop1_pct) << "\n";
        csv << "2," << format_double(result.hop2_pct) << "\n";
        write_atomic(opt.csv, csv.str());
    }

    ordered_json summary;
    summary["command"] = "distances";
    summary["seed"] = 0;
    summary["curvature"] = opt.curvature;
    summary["n_pairs"] = result.n_pairs;
    summary["output"] = opt.output;
    emit_summary(summary);
    return kExitOk;
}

// ---- layer -----------------------------------------------------------------

struct LayerOptions {
    std::string input;
    std::string params;
    std::string output;
    std::string embedding_format = "text";
    double curvature = 1.0;
    double eps = geometry::kBoundaryEps;
    double gradcheck_threshold = 1e-5;
    std::uint64_t seed = 0;
    Eigen::Index output_dim = 0;  // 0: same as input dimension
    int gradcheck_positions = 5;
    bool gradcheck = false;
    bool paper_literal = false;
};

// Central-difference check of backward() at one position; returns the
// worst relative error across d_input, d_weights and d_biases.
double gradcheck_position(const geometry::BallPoint& x,
                          const layer::PoincareLinearParams& params,
                          const Eigen::VectorXd& upstream, layer::OutputDenominator mode) {
    constexpr double h = 1e-5;
    const auto rel = [](double a, double b) {
        return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
    };
    const auto loss = [&](const Eigen::VectorXd& coords, const Eigen::MatrixXd& w,
                          const Eigen::VectorXd& b) {
        const layer::PoincareLinearParams p(w, b, params.curvature());
        return upstream.dot(
            layer::forward(geometry::BallPoint(coords, params.curvature()), p, mode)
                .coords());
    };

    const auto analytic = layer::backward(x, params, upstream, mode);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.dim(); ++i) {
        Eigen::VectorXd plus = x.coords();
        Eigen::VectorXd minus = x.coords();
        plus[i] += h;
        minus[i] -= h;
        const double fd = (loss(plus, params.weights(), params.biases()) -
                           loss(minus, params.weights(), params.biases())) /
                          (2.0 * h);
        worst = std::max(worst, rel(analytic.d_input[i], fd));
    }
    for (Eigen::Index k = 0; k < params.output_dim(); ++k) {
        for (Eigen::Index j = 0; j < params.input_dim(); ++j) {
            Eigen::MatrixXd plus = params.weights();
            Eigen::MatrixXd minus = params.weights();
            plus(k, j) += h;
            minus(k, j) -= h;
            const double fd = (loss(x.coords(), plus, params.biases()) -
                               loss(x.coords(), minus, params.biases())) /
                              (2.0 * h);
            worst = std::max(worst, rel(analytic.d_weights(k, j), fd));
        }
        Eigen::VectorXd plus = params.biases();
        Eigen::VectorXd minus = params.biases();
        plus[k] += h;
        minus[k] -= h;
        const double fd = (loss(x.coords(), params.weights(), plus) -
                           loss(x.coords(), params.weights(), minus)) /
                          (2.0 * h);
        worst = std::max(worst, rel(analytic.d_biases[k], fd));
    }
    return worst;
}

int cmd_layer(const LayerOptions& opt) {
    auto in = open_input(opt.input);
    const auto table =
        analysis::EmbeddingTable::load(in, parse_embedding_format(opt.embedding_format));

    std::optional<layer::PoincareLinearParams> params;
    if (!opt.params.empty()) {
        auto params_in = open_input(opt.params);
        params = layer::PoincareLinearParams::load(params_in);
        if (params->input_dim() != table.dim()) {
            throw std::runtime_error("parameter input dimension " +
                                     std::to_string(params->input_dim()) +
                                     " does not match embeddings of dimension " +
                                     std::to_string(table.dim()));
        }
    } else {
        const auto m = opt.output_dim > 0 ? opt.output_dim : table.dim();
        params = layer::PoincareLinearParams::random_init(
            m, table.dim(), geometry::Curvature(opt.curvature), opt.seed);
    }
    const auto mode = opt.paper_literal ? layer::OutputDenominator::paper_literal
                                        : layer::OutputDenominator::squared;

    std::vector<Eigen::VectorXd> inputs;
    inputs.reserve(static_cast<std::size_t>(table.size()));
    for (Eigen::Index i = 0; i < table.size(); ++i) {
        inputs.push_back(table.vectors().row(i).transpose());
    }
    const auto outputs = layer::sequence_transform(inputs, *params, opt.eps, mode);

    Eigen::MatrixXd out_matrix(table.size(), params->output_dim());
    for (Eigen::Index i = 0; i < table.size(); ++i) {
        out_matrix.row(i) = outputs[static_cast<std::size_t>(i)].transpose();
    }
    std::ostringstream out_text;
    analysis::EmbeddingTable(table.names(), out_matrix).save(out_text);
    write_atomic(opt.output, out_text.str());

    ordered_json summary;
    summary["command"] = "layer";
    summary["seed"] = opt.seed;
    summary["mode"] = opt.paper_literal ? "paper_literal" : "squared";
    summary["m"] = params->output_dim();
    summary["n"] = params->input_dim();
    summary["curvature"] = params->curvature().value();
    summary["positions"] = table.size();
    summary["output"] = opt.output;

    if (opt.gradcheck) {
        const auto positions =
            std::min<Eigen::Index>(opt.gradcheck_positions, table.size());
        double worst = 0.0;
        for (Eigen::Index i = 0; i < positions; ++i) {
            const auto mapped = geometry::exp_map_origin(
                geometry::TangentVector(inputs[static_cast<std::size_t>(i)]),
                params->curvature());
            const auto x = geometry::project_to_ball(mapped.coords(),
                                                     params->curvature(), opt.eps);
            auto rng = make_rng(derive_seed(opt.seed, static_cast<std::uint64_t>(i)));
            std::normal_distribution<double> normal(0.0, 1.0);
            Eigen::VectorXd upstream(params->output_dim());
            for (Eigen::Index k = 0; k < upstream.size(); ++k) upstream[k] = normal(rng);
            worst = std::max(worst, gradcheck_position(x, *params, upstream, mode));
        }
        summary["gradcheck_positions"] = positions;
        summary["gradcheck_max_rel_error"] = worst;
        summary["gradcheck_threshold"] = opt.gradcheck_threshold;
        emit_summary(summary);
        if (worst > opt.gradcheck_threshold) {
            throw CheckFailure("gradient check failed: max relative error " +
                               format_double(worst) + " exceeds " +
                               format_double(opt.gradcheck_threshold));
        }
        return kExitOk;
    }

    emit_summary(summary);
    return kExitOk;
}

// ---- em ----------------------------------------------------------------------

struct EmOptions {
    std::string input;
    std::string output;
};

int cmd_em(const EmOptions& opt) {
    auto in = open_input(opt.input);
    const auto records = analysis::load_prediction_records(in);
    const double em = analysis::em_score(records);

    ordered_json j;
    j["em"] = em;
    j["n"] = records.size();
    write_atomic(opt.output, j.dump(2) + "\n");

    ordered_json summary;
    summary["command"] = "em";
    summary["seed"] = 0;
    summary["em"] = em;
    summary["n"] = records.size();
    summary["output"] = opt.output;
    emit_summary(summary);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperbolic geometry and knowledge-graph analysis toolkit"};
    app.require_subcommand(1);

    DeltaOptions delta_opt;
    auto* delta = app.add_subcommand(
        "delta", "Estimate relative delta-hyperbolicity and derive a curvature");
    delta->add_option("--input", delta_opt.input, "Triples or embedding file")
        ->required()
        ->envname("HYPERKG_INPUT");
    delta->add_option("--output", delta_opt.output, "Output JSON path")->required();
    delta->add_option("--metric", delta_opt.metric, "Metric source: graph or embedding")
        ->envname("HYPERKG_METRIC");
    delta->add_option("--format", delta_opt.format,
                      "Input format (tsv/jsonl triples, text/jsonl embeddings)");
    delta->add_option("--seed", delta_opt.seed, "Master random seed")
        ->envname("HYPERKG_SEED");
    delta->add_option("--sample-size", delta_opt.sample_size, "Points per repeat")
        ->check(CLI::PositiveNumber)
        ->envname("HYPERKG_SAMPLE_SIZE");
    delta->add_option("--repeats", delta_opt.repeats, "Number of repeats")
        ->check(CLI::PositiveNumber)
        ->envname("HYPERKG_REPEATS");
    delta->add_flag("--strict", delta_opt.strict, "Abort on malformed input lines");

    WalksOptions walks_opt;
    auto* walks = app.add_subcommand(
        "walks", "Generate uniform random walks and hopping example pairs");
    walks->add_option("--input", walks_opt.input, "Triples file")->required();
    walks->add_option("--output", walks_opt.output, "Output JSONL path")->required();
    walks->add_option("--format", walks_opt.format, "Triples format (tsv or jsonl)");
    walks->add_option("--heldout", walks_opt.heldout,
                      "JSONL of held-out walks to exclude");
    walks->add_option("--start", walks_opt.start, "Fixed start entity (default: random)");
    walks->add_option("--exclusion", walks_opt.exclusion,
                      "Held-out matching: exact or subpath");
    walks->add_option("--seed", walks_opt.seed, "Master random seed")
        ->envname("HYPERKG_SEED");
    walks->add_option("--hops", walks_opt.hops, "Walk length in hops")
        ->check(CLI::PositiveNumber)
        ->envname("HYPERKG_HOPS");
    walks->add_option("--num-walks", walks_opt.num_walks,
                      "Walks to generate (default: one per entity)");
    walks->add_flag("--strict", walks_opt.strict, "Abort on malformed input lines");

    DegreeOptions degree_opt;
    auto* degree =
        app.add_subcommand("degree", "Out-degree distribution of the knowledge graph");
    degree->add_option("--input", degree_opt.input, "Triples file")->required();
    degree->add_option("--output", degree_opt.output, "Output CSV path")->required();
    degree->add_option("--format", degree_opt.format, "Triples format (tsv or jsonl)");
    degree->add_flag("--strict", degree_opt.strict, "Abort on malformed input lines");

    EvidenceOptions evidence_opt;
    auto* evidence = app.add_subcommand(
        "evidence", "Construct evidence chains for MetaQA-style question records");
    evidence->add_option("--input", evidence_opt.input, "Question records JSONL")
        ->required();
    evidence->add_option("--triples", evidence_opt.triples, "Triples file")->required();
    evidence->add_option("--output", evidence_opt.output, "Output JSONL path")->required();
    evidence->add_option("--mapping", evidence_opt.mapping,
                         "Pair-to-relation mapping TSV (default: built-in)");
    evidence->add_option("--errors", evidence_opt.errors,
                         "Sidecar JSONL for unresolved records");
    evidence->add_option("--format", evidence_opt.format, "Triples format (tsv or jsonl)");
    evidence->add_option("--hops", evidence_opt.hops, "Expected hops per record")
        ->check(CLI::PositiveNumber)
        ->envname("HYPERKG_HOPS");
    evidence->add_flag("--strict", evidence_opt.strict, "Abort on malformed input lines");

    DistancesOptions distances_opt;
    auto* distances = app.add_subcommand(
        "distances", "Compare geodesic and Euclidean source-relation distances");
    distances->add_option("--hyperbolic", distances_opt.hyperbolic,
                          "Hyperbolic embedding file")
        ->required();
    distances->add_option("--euclidean", distances_opt.euclidean,
                          "Euclidean embedding file")
        ->required();
    distances->add_option("--pairs", distances_opt.pairs, "Question records JSONL")
        ->required();
    distances->add_option("--output", distances_opt.output, "Output JSON path")
        ->required();
    distances->add_option("--csv", distances_opt.csv, "Optional CSV output path");
    distances->add_option("--embedding-format", distances_opt.embedding_format,
                          "Embedding format (text or jsonl)");
    distances->add_option("--curvature", distances_opt.curvature, "Ball curvature c")
        ->check(CLI::PositiveNumber)
        ->envname("HYPERKG_CURVATURE");
    distances->add_flag("--in-ball", distances_opt.in_ball,
                        "Hyperbolic vectors are already ball coordinates");

    LayerOptions layer_opt;
    auto* layer_cmd = app.add_subcommand(
        "layer", "Run embeddings through the Poincare linear layer");
    layer_cmd->add_option("--input", layer_opt.input, "Embedding file")->required();
    layer_cmd->add_option("--output", layer_opt.output, "Transformed embedding path")
        ->required();
    layer_cmd->add_option("--params", layer_opt.params,
                          "Layer parameter file (default: random init)");
    layer_cmd->add_option("--embedding-format", layer_opt.embedding_format,
                          "Embedding format (text or jsonl)");
    layer_cmd->add_option("--curvature", layer_opt.curvature,
                          "Ball curvature for random init")
        ->check(CLI::PositiveNumber)
        ->envname("HYPERKG_CURVATURE");
    layer_cmd->add_option("--m", layer_opt.output_dim,
                          "Output dimension for random init (default: input dimension)");
    layer_cmd->add_option("--seed", layer_opt.seed, "Random-init seed")
        ->envname("HYPERKG_SEED");
    layer_cmd->add_option("--eps", layer_opt.eps, "Ball boundary margin");
    layer_cmd->add_flag("--gradcheck", layer_opt.gradcheck,
                        "Check backward against finite differences");
    layer_cmd->add_option("--gradcheck-positions", layer_opt.gradcheck_positions,
                          "Positions sampled by --gradcheck");
    layer_cmd->add_option("--gradcheck-threshold", layer_opt.gradcheck_threshold,
                          "Max relative error tolerated by --gradcheck");
    layer_cmd->add_flag("--paper-literal-denominator", layer_opt.paper_literal,
                        "Use the unsquared output denominator");

    EmOptions em_opt;
    auto* em = app.add_subcommand("em", "Exact-match score for prediction records");
    em->add_option("--input", em_opt.input, "Predictions JSONL")->required();
    em->add_option("--output", em_opt.output, "Output JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (delta->parsed()) return cmd_delta(delta_opt);
        if (walks->parsed()) return cmd_walks(walks_opt);
        if (degree->parsed()) return cmd_degree(degree_opt);
        if (evidence->parsed()) return cmd_evidence(evidence_opt);
        if (distances->parsed()) return cmd_distances(distances_opt);
        if (layer_cmd->parsed()) return cmd_layer(layer_opt);
        if (em->parsed()) return cmd_em(em_opt);
        std::cerr << "error: no command selected\n";
        return kExitInput;
    } catch (const CheckFailure& e) {
        std::cerr << "check failure: " << e.what() << "\n";
        return kExitCheck;
    } catch (const hyperbolicity::DegenerateSampleError& e) {
        std::cerr << "check failure: " << e.what() << "\n";
        return kExitCheck;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
