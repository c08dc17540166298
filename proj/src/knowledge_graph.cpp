#include "hyperkg/knowledge_graph.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace hyperkg::kg {

namespace {

std::string trim(std::string_view s) {
    const char* ws = " \t\r\n";
    const auto begin = s.find_first_not_of(ws);
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(ws);
    return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> parts;
    std::string::size_type start = 0;
    while (true) {
        const auto pos = s.find(delim, start);
        if (pos == std::string::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

// Collision-free join for sequence comparison.
std::string sequence_key(const std::vector<std::string>& tokens) {
    std::string key;
    for (const auto& t : tokens) {
        key += t;
        key += '\x1f';
    }
    return key;
}

std::string triple_key(const Triple& t) {
    return t.head + '\x1f' + t.relation + '\x1f' + t.tail;
}

std::optional<Triple> parse_tsv_line(const std::string& line, std::string& error) {
    const auto parts = split(line, '\t');
    if (parts.size() != 3) {
        error = "expected 3 tab-separated fields, got " + std::to_string(parts.size());
        return std::nullopt;
    }
    Triple t{trim(parts[0]), trim(parts[1]), trim(parts[2])};
    if (t.head.empty() || t.relation.empty() || t.tail.empty()) {
        error = "empty field after trimming";
        return std::nullopt;
    }
    return t;
}

std::optional<Triple> parse_jsonl_line(const std::string& line, std::string& error) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        error = "invalid JSON object";
        return std::nullopt;
    }
    for (const char* key : {"h", "r", "t"}) {
        if (!j.contains(key) || !j[key].is_string()) {
            error = std::string("missing string field \"") + key + "\"";
            return std::nullopt;
        }
    }
    Triple t{trim(j["h"].get<std::string>()), trim(j["r"].get<std::string>()),
             trim(j["t"].get<std::string>())};
    if (t.head.empty() || t.relation.empty() || t.tail.empty()) {
        error = "empty field after trimming";
        return std::nullopt;
    }
    return t;
}

} // namespace

TripleLoadResult load_triples(std::istream& in, TripleFormat format, bool strict) {
    TripleLoadResult result;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::string error;
        const auto triple = format == TripleFormat::tsv ? parse_tsv_line(line, error)
                                                        : parse_jsonl_line(line, error);
        if (!triple) {
            if (strict) {
                throw std::runtime_error("line " + std::to_string(line_no) + ": " + error);
            }
            result.errors.push_back({line_no, error});
            continue;
        }
        if (!seen.insert(triple_key(*triple)).second) {
            ++result.duplicates;
            continue;
        }
        result.triples.push_back(*triple);
    }
    return result;
}

std::int32_t KnowledgeGraph::intern_entity(const std::string& name) {
    const auto [it, inserted] =
        entity_ids_.try_emplace(name, static_cast<std::int32_t>(entity_names_.size()));
    if (inserted) {
        entity_names_.push_back(name);
        adjacency_.emplace_back();
    }
    return it->second;
}

std::int32_t KnowledgeGraph::intern_relation(const std::string& name) {
    const auto [it, inserted] =
        relation_ids_.try_emplace(name, static_cast<std::int32_t>(relation_names_.size()));
    if (inserted) {
        relation_names_.push_back(name);
    }
    return it->second;
}

KnowledgeGraph KnowledgeGraph::from_triples(const std::vector<Triple>& triples) {
    KnowledgeGraph g;
    std::unordered_set<std::string> seen;
    for (const auto& t : triples) {
        if (t.head.empty() || t.relation.empty() || t.tail.empty()) {
            throw std::invalid_argument("triple with empty field");
        }
        if (!seen.insert(triple_key(t)).second) continue;
        const auto head = g.intern_entity(t.head);
        const auto tail = g.intern_entity(t.tail);
        const auto rel = g.intern_relation(t.relation);
        g.adjacency_[static_cast<std::size_t>(head)].push_back({rel, tail});
        ++g.edge_count_;
    }
    return g;
}

std::optional<std::int32_t> KnowledgeGraph::entity_id(const std::string& name) const {
    const auto it = entity_ids_.find(name);
    if (it == entity_ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::int32_t> KnowledgeGraph::relation_id(const std::string& name) const {
    const auto it = relation_ids_.find(name);
    if (it == relation_ids_.end()) return std::nullopt;
    return it->second;
}

bool KnowledgeGraph::has_edge(const std::string& head, const std::string& relation,
                              const std::string& tail) const {
    const auto h = entity_id(head);
    const auto r = relation_id(relation);
    const auto t = entity_id(tail);
    if (!h || !r || !t) return false;
    const auto& edges = adjacency_[static_cast<std::size_t>(*h)];
    return std::any_of(edges.begin(), edges.end(), [&](const Edge& e) {
        return e.relation == *r && e.target == *t;
    });
}

std::vector<std::int32_t> KnowledgeGraph::targets(std::int32_t head,
                                                  std::int32_t relation) const {
    std::vector<std::int32_t> out;
    for (const auto& e : adjacency_.at(static_cast<std::size_t>(head))) {
        if (e.relation == relation) out.push_back(e.target);
    }
    return out;
}

std::vector<std::int32_t> KnowledgeGraph::largest_component() const {
    const auto n = static_cast<std::int32_t>(entity_count());
    std::vector<std::vector<std::int32_t>> undirected(static_cast<std::size_t>(n));
    for (std::int32_t u = 0; u < n; ++u) {
        for (const auto& e : adjacency_[static_cast<std::size_t>(u)]) {
            undirected[static_cast<std::size_t>(u)].push_back(e.target);
            undirected[static_cast<std::size_t>(e.target)].push_back(u);
        }
    }

    std::vector<std::int32_t> best;
    std::vector<bool> visited(static_cast<std::size_t>(n), false);
    for (std::int32_t s = 0; s < n; ++s) {
        if (visited[static_cast<std::size_t>(s)]) continue;
        std::vector<std::int32_t> component;
        std::deque<std::int32_t> queue{s};
        visited[static_cast<std::size_t>(s)] = true;
        while (!queue.empty()) {
            const auto u = queue.front();
            queue.pop_front();
            component.push_back(u);
            for (const auto v : undirected[static_cast<std::size_t>(u)]) {
                if (!visited[static_cast<std::size_t>(v)]) {
                    visited[static_cast<std::size_t>(v)] = true;
                    queue.push_back(v);
                }
            }
        }
        if (component.size() > best.size()) {
            std::sort(component.begin(), component.end());
            best = std::move(component);
        }
    }
    return best;
}

bool walk_is_valid(const Walk& walk, const KnowledgeGraph& graph) {
    const auto& t = walk.tokens;
    if (t.empty() || t.size() % 2 == 0) return false;
    if (t.size() == 1) return graph.entity_id(t[0]).has_value();
    for (std::size_t i = 0; i + 2 < t.size(); i += 2) {
        if (!graph.has_edge(t[i], t[i + 1], t[i + 2])) return false;
    }
    return true;
}

Walk random_walk(const KnowledgeGraph& graph, const std::string& start, int hops,
                 std::mt19937_64& rng) {
    if (hops < 1) {
        throw std::invalid_argument("hops must be >= 1");
    }
    const auto start_id = graph.entity_id(start);
    if (!start_id) {
        throw std::invalid_argument("start entity not in graph: " + start);
    }

    Walk walk;
    walk.tokens.push_back(start);
    std::int32_t current = *start_id;
    for (int step = 0; step < hops; ++step) {
        const auto& edges = graph.out_edges(current);
        if (edges.empty()) {
            walk.truncated = true;
            return walk;
        }
        std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
        const auto& edge = edges[pick(rng)];
        walk.tokens.push_back(graph.relation_name(edge.relation));
        walk.tokens.push_back(graph.entity_name(edge.target));
        current = edge.target;
    }
    return walk;
}

std::vector<QuestionRecord> load_question_records(std::istream& in) {
    std::vector<QuestionRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        const auto fail = [&](const std::string& what) {
            throw std::runtime_error("question record line " + std::to_string(line_no) +
                                     ": " + what);
        };
        if (j.is_discarded() || !j.is_object()) fail("invalid JSON object");
        QuestionRecord rec;
        for (const auto& [key, dest] :
             std::initializer_list<std::pair<const char*, std::string*>>{
                 {"id", &rec.id}, {"question", &rec.question},
                 {"source", &rec.source}, {"answer", &rec.answer}}) {
            if (!j.contains(key) || !j[key].is_string()) {
                fail(std::string("missing string field \"") + key + "\"");
            }
            *dest = j[key].get<std::string>();
        }
        if (!j.contains("relations") || !j["relations"].is_array()) {
            fail("missing array field \"relations\"");
        }
        for (const auto& r : j["relations"]) {
            if (!r.is_string()) fail("non-string relation");
            rec.relations.push_back(r.get<std::string>());
        }
        if (j.contains("evidence")) {
            if (!j["evidence"].is_array()) fail("\"evidence\" must be an array");
            std::vector<std::string> chain;
            for (const auto& t : j["evidence"]) {
                if (!t.is_string()) fail("non-string evidence token");
                chain.push_back(t.get<std::string>());
            }
            rec.evidence = std::move(chain);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

namespace {

// All complete paths source -r1-> m1 -r2-> ... -> answer; collects
// their edges into `edges`.
bool collect_paths(const KnowledgeGraph& graph, std::int32_t node,
                   const std::vector<std::string>& relations, std::size_t depth,
                   std::int32_t answer, std::vector<Triple>& path,
                   std::vector<Triple>& edges) {
    if (depth == relations.size()) {
        if (node != answer) return false;
        edges.insert(edges.end(), path.begin(), path.end());
        return true;
    }
    const auto rel = graph.relation_id(relations[depth]);
    if (!rel) return false;
    bool found = false;
    for (const auto target : graph.targets(node, *rel)) {
        path.push_back({graph.entity_name(node), relations[depth],
                        graph.entity_name(target)});
        found |= collect_paths(graph, target, relations, depth + 1, answer, path, edges);
        path.pop_back();
    }
    return found;
}

} // namespace

SubgraphResult extract_question_subgraph(const KnowledgeGraph& graph,
                                         const std::vector<QuestionRecord>& questions) {
    SubgraphResult result;
    std::unordered_set<std::string> seen;
    const auto add_edge = [&](const Triple& t) {
        if (seen.insert(triple_key(t)).second) result.triples.push_back(t);
    };

    for (const auto& q : questions) {
        if (q.evidence) {
            const auto& chain = *q.evidence;
            bool ok = chain.size() >= 3 && chain.size() % 2 == 1;
            if (ok) {
                for (std::size_t i = 0; i + 2 < chain.size(); i += 2) {
                    if (!graph.has_edge(chain[i], chain[i + 1], chain[i + 2])) {
                        ok = false;
                        break;
                    }
                }
            }
            if (!ok) {
                result.failed_ids.push_back(q.id);
                continue;
            }
            for (std::size_t i = 0; i + 2 < chain.size(); i += 2) {
                add_edge({chain[i], chain[i + 1], chain[i + 2]});
            }
            continue;
        }

        const auto source = graph.entity_id(q.source);
        const auto answer = graph.entity_id(q.answer);
        if (!source || !answer || q.relations.empty()) {
            result.failed_ids.push_back(q.id);
            continue;
        }
        std::vector<Triple> path;
        std::vector<Triple> edges;
        if (!collect_paths(graph, *source, q.relations, 0, *answer, path, edges)) {
            result.failed_ids.push_back(q.id);
            continue;
        }
        for (const auto& e : edges) add_edge(e);
    }
    return result;
}

HoppingBuildResult build_hopping_examples(const KnowledgeGraph& graph,
                                          const std::vector<Walk>& walks,
                                          const std::vector<Walk>& heldout,
                                          ExclusionMode mode) {
    std::unordered_set<std::string> excluded_keys;
    for (const auto& w : heldout) excluded_keys.insert(sequence_key(w.tokens));

    const auto contains_heldout_subpath = [&](const std::vector<std::string>& tokens) {
        for (const auto& h : heldout) {
            const auto& sub = h.tokens;
            if (sub.empty() || sub.size() > tokens.size()) continue;
            for (std::size_t off = 0; off + sub.size() <= tokens.size(); off += 2) {
                if (std::equal(sub.begin(), sub.end(), tokens.begin() + off)) {
                    return true;
                }
            }
        }
        return false;
    };

    HoppingBuildResult result;
    for (const auto& walk : walks) {
        if (!walk_is_valid(walk, graph)) {
            throw std::invalid_argument("walk does not validate against the graph: " +
                                        join_tokens(walk.tokens));
        }
        const bool drop = mode == ExclusionMode::exact_sequence
                              ? excluded_keys.count(sequence_key(walk.tokens)) > 0
                              : (excluded_keys.count(sequence_key(walk.tokens)) > 0 ||
                                 contains_heldout_subpath(walk.tokens));
        if (drop) {
            ++result.excluded;
            continue;
        }
        HoppingExample ex;
        ex.input.push_back(walk.tokens[0]);
        for (std::size_t i = 1; i < walk.tokens.size(); i += 2) {
            ex.input.push_back(walk.tokens[i]);
        }
        ex.target = walk.tokens;
        result.examples.push_back(std::move(ex));
    }
    return result;
}

std::vector<ParsingExample> build_parsing_examples(
    const std::vector<QuestionRecord>& questions, std::size_t hops) {
    std::vector<ParsingExample> out;
    out.reserve(questions.size());
    for (const auto& q : questions) {
        if (q.source.empty() || q.relations.empty()) {
            throw std::invalid_argument("question " + q.id +
                                        " lacks source/relation annotations");
        }
        if (q.relations.size() != hops) {
            throw std::invalid_argument(
                "question " + q.id + " has " + std::to_string(q.relations.size()) +
                " relations, expected " + std::to_string(hops));
        }
        ParsingExample ex;
        ex.question = q.question;
        ex.target.push_back(q.source);
        ex.target.insert(ex.target.end(), q.relations.begin(), q.relations.end());
        out.push_back(std::move(ex));
    }
    return out;
}

std::string join_tokens(const std::vector<std::string>& tokens,
                        const std::string& separator) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) out += separator;
        out += tokens[i];
    }
    return out;
}

std::map<std::size_t, double> out_degree_histogram(const KnowledgeGraph& graph) {
    if (graph.entity_count() == 0) {
        throw std::invalid_argument("out-degree histogram of an empty graph");
    }
    std::map<std::size_t, std::size_t> counts;
    for (std::int32_t e = 0; e < static_cast<std::int32_t>(graph.entity_count()); ++e) {
        ++counts[graph.out_edges(e).size()];
    }
    std::map<std::size_t, double> histogram;
    const auto total = static_cast<double>(graph.entity_count());
    for (const auto& [degree, count] : counts) {
        histogram[degree] = static_cast<double>(count) / total;
    }
    return histogram;
}

std::vector<MetaQaRecord> load_metaqa_records(std::istream& in) {
    std::vector<MetaQaRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        const auto fail = [&](const std::string& what) {
            throw std::runtime_error("metaqa record line " + std::to_string(line_no) +
                                     ": " + what);
        };
        if (j.is_discarded() || !j.is_object()) fail("invalid JSON object");
        MetaQaRecord rec;
        for (const auto& [key, dest] :
             std::initializer_list<std::pair<const char*, std::string*>>{
                 {"id", &rec.id}, {"question", &rec.question}, {"source", &rec.source},
                 {"path", &rec.path}, {"answer", &rec.answer}}) {
            if (!j.contains(key) || !j[key].is_string()) {
                fail(std::string("missing string field \"") + key + "\"");
            }
            *dest = j[key].get<std::string>();
        }
        records.push_back(std::move(rec));
    }
    return records;
}

PairRelationMap PairRelationMap::builtin_metaqa() {
    PairRelationMap m;
    m.map_ = {
        {{"movie", "language"}, "in_language"},
        {{"movie", "year"}, "release_year"},
        {{"movie", "writer"}, "written_by"},
        {{"movie", "director"}, "directed_by"},
        {{"movie", "genre"}, "has_genre"},
        {{"movie", "actor"}, "starred_actors"},
        {{"language", "movie"}, "in_language_reversed"},
        {{"year", "movie"}, "release_year_reversed"},
        {{"writer", "movie"}, "written_by_reversed"},
        {{"director", "movie"}, "directed_by_reversed"},
        {{"genre", "movie"}, "has_genre_reversed"},
        {{"actor", "movie"}, "starred_actors_reversed"},
    };
    return m;
}

PairRelationMap PairRelationMap::load(std::istream& in) {
    PairRelationMap m;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || line[0] == '#') continue;
        const auto parts = split(line, '\t');
        if (parts.size() != 3) {
            throw std::runtime_error("pair mapping line " + std::to_string(line_no) +
                                     ": expected 3 tab-separated fields");
        }
        m.map_[{trim(parts[0]), trim(parts[1])}] = trim(parts[2]);
    }
    if (m.map_.empty()) {
        throw std::runtime_error("pair mapping file is empty");
    }
    return m;
}

std::optional<std::string> PairRelationMap::lookup(const std::string& a,
                                                   const std::string& b) const {
    const auto it = map_.find({a, b});
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

EvidenceResult metaqa_evidence(const MetaQaRecord& record, const KnowledgeGraph& graph,
                               const PairRelationMap& mapping, std::size_t hops) {
    if (hops != 2) {
        throw std::invalid_argument("evidence construction supports 2-hop records only");
    }
    EvidenceResult result;

    std::vector<std::string> types;
    std::string rest = record.path;
    while (true) {
        const auto pos = rest.find("_to_");
        if (pos == std::string::npos) {
            types.push_back(rest);
            break;
        }
        types.push_back(rest.substr(0, pos));
        rest = rest.substr(pos + 4);
    }
    if (types.size() != hops + 1) {
        result.status = EvidenceStatus::hop_mismatch;
        result.message = "path \"" + record.path + "\" has " +
                         std::to_string(types.size() - 1) + " hops, expected " +
                         std::to_string(hops);
        return result;
    }

    std::vector<std::string> relations;
    for (std::size_t i = 0; i + 1 < types.size(); ++i) {
        const auto rel = mapping.lookup(types[i], types[i + 1]);
        if (!rel) {
            result.status = EvidenceStatus::unknown_pair;
            result.message = "no relation mapped for pair (" + types[i] + ", " +
                             types[i + 1] + ")";
            return result;
        }
        relations.push_back(*rel);
    }

    const auto source = graph.entity_id(record.source);
    const auto answer = graph.entity_id(record.answer);
    if (!source || !answer) {
        result.status = EvidenceStatus::missing_entity;
        result.message = std::string("entity not in graph: ") +
                         (!source ? record.source : record.answer);
        return result;
    }

    std::vector<std::int32_t> intermediates;
    const auto r1 = graph.relation_id(relations[0]);
    const auto r2 = graph.relation_id(relations[1]);
    if (r1 && r2) {
        for (const auto m : graph.targets(*source, *r1)) {
            const auto tails = graph.targets(m, *r2);
            if (std::find(tails.begin(), tails.end(), *answer) != tails.end()) {
                intermediates.push_back(m);
            }
        }
    }
    std::sort(intermediates.begin(), intermediates.end());
    intermediates.erase(std::unique(intermediates.begin(), intermediates.end()),
                        intermediates.end());

    if (intermediates.empty()) {
        result.status = EvidenceStatus::no_intermediate;
        result.message = "no entity completes (" + record.source + ", " + relations[0] +
                         ", ?, " + relations[1] + ", " + record.answer + ")";
        return result;
    }
    if (intermediates.size() > 1) {
        result.status = EvidenceStatus::ambiguous;
        for (const auto m : intermediates) {
            result.candidates.push_back(graph.entity_name(m));
        }
        result.message = "ambiguous intermediate: " + std::to_string(intermediates.size()) +
                         " candidates";
        return result;
    }

    Walk chain;
    chain.tokens = {record.source, relations[0], graph.entity_name(intermediates[0]),
                    relations[1], record.answer};
    result.chain = std::move(chain);
    return result;
}

namespace {

std::vector<std::vector<std::int32_t>> undirected_adjacency(const KnowledgeGraph& graph) {
    std::vector<std::vector<std::int32_t>> adj(graph.entity_count());
    for (std::int32_t u = 0; u < static_cast<std::int32_t>(graph.entity_count()); ++u) {
        for (const auto& e : graph.out_edges(u)) {
            adj[static_cast<std::size_t>(u)].push_back(e.target);
            adj[static_cast<std::size_t>(e.target)].push_back(u);
        }
    }
    for (auto& neighbors : adj) {
        std::sort(neighbors.begin(), neighbors.end());
        neighbors.erase(std::unique(neighbors.begin(), neighbors.end()), neighbors.end());
    }
    return adj;
}

// Single-source BFS over an undirected adjacency; -1 marks unreachable.
std::vector<std::int32_t> bfs_distances(
    const std::vector<std::vector<std::int32_t>>& adj, std::int32_t source) {
    std::vector<std::int32_t> dist(adj.size(), -1);
    std::deque<std::int32_t> queue{source};
    dist[static_cast<std::size_t>(source)] = 0;
    while (!queue.empty()) {
        const auto u = queue.front();
        queue.pop_front();
        for (const auto v : adj[static_cast<std::size_t>(u)]) {
            if (dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

} // namespace

hyperbolicity::DistanceMatrix ShortestPathResult::distance_matrix() const {
    if (!connected()) {
        throw std::domain_error("shortest-path matrix spans disconnected components");
    }
    return hyperbolicity::DistanceMatrix(distances, labels);
}

ShortestPathResult shortest_path_matrix(const KnowledgeGraph& graph,
                                        const std::vector<std::string>& nodes) {
    if (nodes.empty()) {
        throw std::invalid_argument("node subset must be nonempty");
    }
    std::vector<std::int32_t> ids;
    ids.reserve(nodes.size());
    for (const auto& name : nodes) {
        const auto id = graph.entity_id(name);
        if (!id) {
            throw std::invalid_argument("node not in graph: " + name);
        }
        ids.push_back(*id);
    }

    const auto adj = undirected_adjacency(graph);
    const auto n = static_cast<Eigen::Index>(ids.size());
    ShortestPathResult result;
    result.labels = nodes;
    result.distances = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto dist = bfs_distances(adj, ids[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto d = dist[static_cast<std::size_t>(ids[static_cast<std::size_t>(j)])];
            if (d < 0) {
                result.distances(i, j) = std::numeric_limits<double>::infinity();
                if (i < j) result.unreachable.emplace_back(i, j);
            } else {
                result.distances(i, j) = static_cast<double>(d);
            }
        }
    }
    return result;
}

GraphMetricSource::GraphMetricSource(const KnowledgeGraph& graph)
    : graph_(graph), undirected_(undirected_adjacency(graph)),
      component_(graph.largest_component()) {}

std::vector<Eigen::Index> GraphMetricSource::population() const {
    std::vector<Eigen::Index> out;
    out.reserve(component_.size());
    for (const auto id : component_) out.push_back(static_cast<Eigen::Index>(id));
    return out;
}

hyperbolicity::DistanceMatrix GraphMetricSource::matrix_for(
    const std::vector<Eigen::Index>& points) const {
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    std::vector<std::string> labels;
    labels.reserve(points.size());
    for (const auto p : points) {
        labels.push_back(graph_.entity_name(static_cast<std::int32_t>(p)));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto dist = bfs_distances(undirected_, static_cast<std::int32_t>(points[i]));
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto dj = dist[static_cast<std::size_t>(points[j])];
            if (dj < 0) {
                throw std::logic_error("sampled points span disconnected components");
            }
            d(i, j) = static_cast<double>(dj);
        }
    }
    return hyperbolicity::DistanceMatrix(std::move(d), std::move(labels));
}

} // namespace hyperkg::kg
