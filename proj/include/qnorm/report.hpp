#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qnorm/algebra.hpp"
#include "qnorm/density.hpp"
#include "qnorm/outliers.hpp"

// JSON encodings shared by the CLI. Integers are emitted as JSON integers and
// rationals as {"numerator", "denominator"} objects; nothing is a float.
// The layout is documented in docs/json-schema.md.

namespace qnorm {

inline constexpr int kSchemaVersion = 1;

struct RunReport {
    int schema_version = kSchemaVersion;
    std::vector<std::string> command;
    std::optional<nlohmann::json> algebra;
    nlohmann::json results = nlohmann::json::object();
    std::optional<std::int64_t> wall_ms;  // only with --timing

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

nlohmann::json to_json(const RunReport& report);
/// Throws qnorm::UsageError if the document does not follow the schema.
RunReport run_report_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const QuaternionAlgebra& algebra);
nlohmann::json to_json(const LocalSquareCertificate& cert);
nlohmann::json to_json(const NormWitness& witness);
nlohmann::json to_json(const ExhaustedSearch& search);
nlohmann::json to_json(const NormDecision& decision);
nlohmann::json to_json(const OutlierClassification& classification);
nlohmann::json to_json(const Rational& value);
nlohmann::json to_json(const DensityResult& result);
nlohmann::json to_json(const EmpiricalDensity& result);

}  // namespace qnorm
