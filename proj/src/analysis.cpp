#include "hyperkg/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace hyperkg::analysis {

std::string normalize_answer(std::string_view text) {
    // Lowercase and strip ASCII punctuation in one pass; bytes >= 0x80
    // (multibyte UTF-8) pass through untouched.
    std::string cleaned;
    cleaned.reserve(text.size());
    for (const char ch : text) {
        const auto uc = static_cast<unsigned char>(ch);
        if (uc < 0x80 && std::ispunct(uc)) continue;
        cleaned.push_back(static_cast<char>(uc < 0x80 ? std::tolower(uc) : uc));
    }

    // Drop article tokens and collapse whitespace.
    std::istringstream words(cleaned);
    std::string word;
    std::string out;
    while (words >> word) {
        if (word == "a" || word == "an" || word == "the") continue;
        if (!out.empty()) out.push_back(' ');
        out += word;
    }
    return out;
}

std::vector<PredictionRecord> load_prediction_records(std::istream& in) {
    std::vector<PredictionRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        const auto fail = [&](const std::string& what) {
            throw std::runtime_error("prediction record line " + std::to_string(line_no) +
                                     ": " + what);
        };
        if (j.is_discarded() || !j.is_object()) fail("invalid JSON object");
        PredictionRecord rec;
        for (const auto& [key, dest] :
             std::initializer_list<std::pair<const char*, std::string*>>{
                 {"id", &rec.id}, {"prediction", &rec.prediction}, {"gold", &rec.gold}}) {
            if (!j.contains(key) || !j[key].is_string()) {
                fail(std::string("missing string field \"") + key + "\"");
            }
            *dest = j[key].get<std::string>();
        }
        records.push_back(std::move(rec));
    }
    return records;
}

double em_score(const std::vector<PredictionRecord>& records) {
    if (records.empty()) {
        throw std::invalid_argument("EM score of an empty record list");
    }
    std::unordered_set<std::string> ids;
    std::size_t matches = 0;
    for (const auto& rec : records) {
        if (!ids.insert(rec.id).second) {
            throw std::invalid_argument("duplicate prediction id: " + rec.id);
        }
        if (normalize_answer(rec.prediction) == normalize_answer(rec.gold)) {
            ++matches;
        }
    }
    return 100.0 * static_cast<double>(matches) / static_cast<double>(records.size());
}

EmbeddingTable::EmbeddingTable(std::vector<std::string> names, Eigen::MatrixXd vectors)
    : names_(std::move(names)), vectors_(std::move(vectors)) {
    if (static_cast<Eigen::Index>(names_.size()) != vectors_.rows()) {
        throw std::invalid_argument("name count does not match row count");
    }
    if (!vectors_.allFinite()) {
        throw std::invalid_argument("embedding table has non-finite values");
    }
    for (Eigen::Index i = 0; i < vectors_.rows(); ++i) {
        const auto [it, inserted] = index_.try_emplace(names_[static_cast<std::size_t>(i)], i);
        if (!inserted) {
            throw std::invalid_argument("duplicate embedding name: " +
                                        names_[static_cast<std::size_t>(i)]);
        }
    }
}

EmbeddingTable EmbeddingTable::load(std::istream& in, EmbeddingFormat format) {
    std::vector<std::string> names;
    std::vector<Eigen::VectorXd> rows;
    Eigen::Index dim = -1;

    if (format == EmbeddingFormat::text) {
        Eigen::Index n = 0;
        if (!(in >> n >> dim) || n < 0 || dim < 1) {
            throw std::runtime_error("embedding header must be \"N n\"");
        }
        std::string line;
        std::getline(in, line);  // finish header line
        std::size_t line_no = 1;
        std::size_t parsed = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
            std::vector<std::string> fields;
            std::istringstream is(line);
            std::string field;
            while (is >> field) fields.push_back(field);
            if (static_cast<Eigen::Index>(fields.size()) < dim + 1) {
                throw std::runtime_error("embedding line " + std::to_string(line_no) +
                                         ": expected a name and " + std::to_string(dim) +
                                         " values");
            }
            // The trailing `dim` fields are numbers; the rest form the name.
            Eigen::VectorXd vec(dim);
            const std::size_t first_value = fields.size() - static_cast<std::size_t>(dim);
            for (Eigen::Index j = 0; j < dim; ++j) {
                const auto& f = fields[first_value + static_cast<std::size_t>(j)];
                std::size_t consumed = 0;
                double value = 0.0;
                try {
                    value = std::stod(f, &consumed);
                } catch (const std::exception&) {
                    consumed = 0;
                }
                if (consumed != f.size()) {
                    throw std::runtime_error("embedding line " + std::to_string(line_no) +
                                             ": bad number \"" + f + "\"");
                }
                vec[j] = value;
            }
            std::string name = fields[0];
            for (std::size_t k = 1; k < first_value; ++k) name += " " + fields[k];
            names.push_back(std::move(name));
            rows.push_back(std::move(vec));
            ++parsed;
        }
        if (static_cast<Eigen::Index>(parsed) != n) {
            throw std::runtime_error("embedding header declared " + std::to_string(n) +
                                     " rows, found " + std::to_string(parsed));
        }
    } else {
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
            nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object() || !j.contains("name") ||
                !j["name"].is_string() || !j.contains("vector") || !j["vector"].is_array()) {
                throw std::runtime_error("embedding line " + std::to_string(line_no) +
                                         ": expected {\"name\", \"vector\"}");
            }
            Eigen::VectorXd vec(static_cast<Eigen::Index>(j["vector"].size()));
            Eigen::Index idx = 0;
            for (const auto& v : j["vector"]) {
                if (!v.is_number()) {
                    throw std::runtime_error("embedding line " + std::to_string(line_no) +
                                             ": non-numeric vector entry");
                }
                vec[idx++] = v.get<double>();
            }
            if (dim < 0) dim = vec.size();
            if (vec.size() != dim) {
                throw std::runtime_error("embedding line " + std::to_string(line_no) +
                                         ": dimension " + std::to_string(vec.size()) +
                                         " != " + std::to_string(dim));
            }
            names.push_back(j["name"].get<std::string>());
            rows.push_back(std::move(vec));
        }
        if (rows.empty()) {
            throw std::runtime_error("embedding stream is empty");
        }
    }

    Eigen::MatrixXd matrix(static_cast<Eigen::Index>(rows.size()), dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        matrix.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    }
    return EmbeddingTable(std::move(names), std::move(matrix));
}

void EmbeddingTable::save(std::ostream& out) const {
    out.precision(17);
    out << size() << ' ' << dim() << '\n';
    for (Eigen::Index i = 0; i < size(); ++i) {
        out << names_[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < dim(); ++j) out << ' ' << vectors_(i, j);
        out << '\n';
    }
}

bool EmbeddingTable::contains(const std::string& name) const {
    return index_.count(name) > 0;
}

Eigen::VectorXd EmbeddingTable::vector(const std::string& name) const {
    const auto it = index_.find(name);
    if (it == index_.end()) {
        throw std::invalid_argument("embedding name not found: " + name);
    }
    return vectors_.row(it->second).transpose();
}

namespace {

geometry::BallPoint into_ball(const Eigen::VectorXd& raw, geometry::Curvature c,
                              bool already_in_ball) {
    if (already_in_ball) {
        return geometry::project_to_ball(raw, c);
    }
    const auto mapped = geometry::exp_map_origin(geometry::TangentVector(raw), c);
    return geometry::project_to_ball(mapped.coords(), c);
}

double hop_percentage(const EmbeddingTable& hyperbolic, const EmbeddingTable& euclidean,
                      const std::vector<std::pair<std::string, std::string>>& pairs,
                      geometry::Curvature c, bool already_in_ball, const char* hop) {
    std::size_t larger = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& [a, b] = pairs[i];
        for (const auto* name : {&a, &b}) {
            if (!hyperbolic.contains(*name) || !euclidean.contains(*name)) {
                throw std::invalid_argument(std::string(hop) + " pair " +
                                            std::to_string(i) + ": missing name \"" +
                                            *name + "\"");
            }
        }
        const auto pa = into_ball(hyperbolic.vector(a), c, already_in_ball);
        const auto pb = into_ball(hyperbolic.vector(b), c, already_in_ball);
        const double geodesic = geometry::distance(pa, pb);
        const double euclid = (euclidean.vector(a) - euclidean.vector(b)).norm();
        if (geodesic > euclid) ++larger;
    }
    return pairs.empty() ? 0.0
                         : 100.0 * static_cast<double>(larger) /
                               static_cast<double>(pairs.size());
}

} // namespace

DistanceComparisonResult distance_comparison(const EmbeddingTable& hyperbolic,
                                             const EmbeddingTable& euclidean,
                                             const HopPairs& pairs, geometry::Curvature c,
                                             bool already_in_ball) {
    DistanceComparisonResult result;
    result.hop1_pct =
        hop_percentage(hyperbolic, euclidean, pairs.hop1, c, already_in_ball, "hop1");
    result.hop2_pct =
        hop_percentage(hyperbolic, euclidean, pairs.hop2, c, already_in_ball, "hop2");
    result.n_pairs = pairs.hop1.size();
    return result;
}

geometry::Curvature curvature_init_policy(const hyperbolicity::DeltaEstimate& estimate) {
    if (!(estimate.mean > 0.0)) {
        throw std::domain_error("curvature initialization needs a positive mean delta_rel");
    }
    return geometry::Curvature(hyperbolicity::curvature_from_delta(estimate.mean));
}

} // namespace hyperkg::analysis
