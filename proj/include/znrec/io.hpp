#pragma once

#include "znrec/attack.hpp"
#include "znrec/generators.hpp"
#include "znrec/stats.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace znrec {

using Json = nlohmann::json;

// Matrix files carry entries as decimal strings: lossless at any magnitude
// and language-neutral.
inline Json matrix_to_json(const IntegerMatrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j).get_str());
        rows.push_back(std::move(row));
    }
    return Json{{"n", m.rows()}, {"m", m.cols()}, {"rows", std::move(rows)}};
}

inline IntegerMatrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("m") || !j.contains("rows"))
        throw std::runtime_error("matrix json: need fields n, m, rows");
    const int n = j.at("n").get<int>();
    const int m = j.at("m").get<int>();
    const auto& rows = j.at("rows");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
        throw std::runtime_error("matrix json: row count mismatch");
    IntegerMatrix out(n, m);
    for (int i = 0; i < n; ++i) {
        const auto& row = rows.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != m)
            throw std::runtime_error("matrix json: column count mismatch");
        for (int c = 0; c < m; ++c) {
            const auto& cell = row.at(c);
            if (cell.is_string())
                out(i, c) = Integer(cell.get<std::string>());
            else if (cell.is_number_integer())
                out(i, c) = int_of(cell.get<long long>());
            else
                throw std::runtime_error("matrix json: entries must be decimal strings");
        }
    }
    return out;
}

inline void save_json(const std::filesystem::path& path, const Json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << j.dump(2) << '\n';
}

inline Json load_json(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path.string());
    return Json::parse(f);
}

inline void save_matrix(const std::filesystem::path& path, const IntegerMatrix& m) {
    save_json(path, matrix_to_json(m));
}

inline IntegerMatrix load_matrix(const std::filesystem::path& path) {
    return matrix_from_json(load_json(path));
}

// FNV-1a over the canonical serialization; used for campaign resume checks.
inline std::string matrix_digest(const IntegerMatrix& m) {
    std::ostringstream os;
    os << m.rows() << ',' << m.cols();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) os << ',' << m(i, j).get_str();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : os.str()) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

inline Json record_to_json(const GenerationRecord& rec) {
    Json params = Json::object();
    for (const auto& [k, v] : rec.params) params[k] = v;
    return Json{{"generator", rec.generator},
                {"params", std::move(params)},
                {"seed", rec.seed},
                {"entropy_bits", rec.entropy_bits},
                {"wall_seconds", rec.wall_seconds},
                {"matrix_digest", matrix_digest(rec.matrix)}};
}

inline Json trace_to_json(const std::vector<StageTrace>& trace) {
    Json arr = Json::array();
    for (const auto& t : trace) {
        arr.push_back(Json{{"stage", t.stage},
                           {"block_size", t.block_size},
                           {"seconds", t.seconds},
                           {"swaps", t.swaps},
                           {"rounds", t.rounds},
                           {"converged", t.converged},
                           {"min_diag", t.min_diag.get_str()},
                           {"max_diag", t.max_diag.get_str()}});
    }
    return arr;
}

inline Json report_to_json(const AttackReport& rep, bool include_transform = true) {
    Json j{{"success", rep.success},
           {"outcome", to_string(rep.outcome)},
           {"total_seconds", rep.total_seconds},
           {"trace", trace_to_json(rep.trace)}};
    j["stage_of_success"] = rep.success ? Json(rep.stage_of_success) : Json(nullptr);
    j["equivalence_verified"] = rep.equivalence_verified.has_value()
                                    ? Json(*rep.equivalence_verified)
                                    : Json(nullptr);
    if (include_transform && rep.recovered_transform.rows() > 0) {
        j["recovered_transform"] = matrix_to_json(rep.recovered_transform);
        if (rep.success) j["recovered_basis"] = matrix_to_json(rep.recovered_basis);
    }
    return j;
}

// exit codes are a total function of the attack outcome
inline int exit_code_for(const AttackReport& rep) {
    switch (rep.outcome) {
        case AttackOutcome::Solved: return 0;
        case AttackOutcome::Exhausted: return 2;
        case AttackOutcome::Timeout: return 3;
    }
    return 2;
}

}  // namespace znrec
