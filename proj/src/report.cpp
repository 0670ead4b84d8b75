#include "qnorm/report.hpp"

#include "qnorm/error.hpp"

namespace qnorm {

using nlohmann::json;

json to_json(const RunReport& report) {
    json doc;
    doc["schema_version"] = report.schema_version;
    doc["command"] = report.command;
    doc["algebra"] = report.algebra ? *report.algebra : json(nullptr);
    doc["results"] = report.results;
    doc["timing"] = report.wall_ms ? json{{"wall_ms", *report.wall_ms}} : json(nullptr);
    return doc;
}

RunReport run_report_from_json(const json& doc) {
    try {
        RunReport report;
        report.schema_version = doc.at("schema_version").get<int>();
        if (report.schema_version != kSchemaVersion)
            throw UsageError("unsupported schema_version " + std::to_string(report.schema_version));
        report.command = doc.at("command").get<std::vector<std::string>>();
        if (!doc.at("algebra").is_null()) report.algebra = doc.at("algebra");
        report.results = doc.at("results");
        if (!report.results.is_object()) throw UsageError("results must be an object");
        const auto& timing = doc.at("timing");
        if (!timing.is_null()) report.wall_ms = timing.at("wall_ms").get<std::int64_t>();
        return report;
    } catch (const json::exception& e) {
        throw UsageError(std::string("malformed run report: ") + e.what());
    }
}

json to_json(const QuaternionAlgebra& algebra) {
    json doc;
    doc["canonical"] = algebra.canonical();
    doc["finite_ramified"] = algebra.finite_ramified();
    doc["infinite_ramified"] = algebra.infinite_ramified();
    doc["definite"] = algebra.is_definite();
    doc["symbol"] = algebra.symbol() ? json::array({algebra.symbol()->first, algebra.symbol()->second}) : json(nullptr);
    return doc;
}

json to_json(const LocalSquareCertificate& cert) {
    return json{
        {"place", cert.place.to_string()},
        {"value", cert.value},
        {"valuation", cert.valuation},
        {"square", cert.square},
        {"reason", to_string(cert.reason)},
        {"unit_residue", cert.unit_residue ? json(*cert.unit_residue) : json(nullptr)},
    };
}

json to_json(const NormWitness& witness) {
    if (const auto* sq = std::get_if<RationalSquareWitness>(&witness.kind)) {
        return json{{"kind", "rational_square"}, {"m", witness.m}, {"root", sq->root}};
    }
    const auto& w = std::get<QuadraticWitness>(witness.kind);
    json certs = json::array();
    for (const auto& c : w.local_certificates) certs.push_back(to_json(c));
    return json{
        {"kind", "quadratic"},
        {"m", witness.m},
        {"b", w.b},
        {"discriminant", w.discriminant},
        {"polynomial", "t^2 + " + std::to_string(w.b) + "t + " + std::to_string(witness.m)},
        {"local_certificates", certs},
    };
}

json to_json(const ExhaustedSearch& search) {
    json rows = json::array();
    for (const auto& c : search.candidates)
        rows.push_back({{"b", c.b}, {"discriminant", c.discriminant}, {"square_at", c.square_at}});
    return json{{"m", search.m}, {"b_max", search.b_max}, {"candidates", rows}};
}

json to_json(const NormDecision& decision) {
    return json{
        {"m", decision.m},
        {"norm", decision.is_norm},
        {"outlier", decision.outlier()},
        {"witness", decision.witness ? to_json(*decision.witness) : json(nullptr)},
        {"exhausted_search", decision.exhausted ? to_json(*decision.exhausted) : json(nullptr)},
    };
}

json to_json(const OutlierClassification& c) {
    json band = nullptr;
    if (c.band) {
        band = json{{"lower", c.band->lower},
                    {"upper", c.band->upper},
                    {"new_outliers", c.band->new_outliers},
                    {"clean", c.band->new_outliers.empty()}};
    }
    return json{
        {"gate", {{"no_outliers", c.gate.no_outliers},
                  {"reason", c.gate.reason.empty() ? json(nullptr) : json(c.gate.reason)}}},
        {"C", c.discriminant},
        {"M", c.bound},
        {"base_outliers", c.base_outliers},
        {"closure_rule", c.closure_rule()},
        {"verified_band", band},
    };
}

json to_json(const Rational& value) {
    return json{{"numerator", value.numerator}, {"denominator", value.denominator}};
}

json to_json(const DensityResult& result) {
    json basis = json::array();
    for (const auto& c : result.basis) basis.push_back(c.representative());
    return json{
        {"satisfying_count", result.satisfying_count},
        {"rank", result.rank},
        {"basis", basis},
        {"density", to_json(result.density())},
    };
}

json to_json(const EmpiricalDensity& result) {
    return json{
        {"prime_bound", result.prime_bound},
        {"satisfying", result.satisfying},
        {"sample_size", result.sample_size},
        {"excluded_primes", result.excluded_primes},
        {"fraction", to_json(result.fraction())},
    };
}

}  // namespace qnorm
