#include "qnorm/cli.hpp"

#include <chrono>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qnorm/error.hpp"
#include "qnorm/parallel.hpp"
#include "qnorm/report.hpp"

namespace qnorm {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

enum class Format { text, json, csv };

struct Settings {
    Format format = Format::text;
    unsigned threads = 1;
    bool timing = false;
};

// A command's report plus its text and CSV renderings (CSV empty if unsupported).
struct Outcome {
    RunReport report;
    std::string text;
    std::string csv;
};

constexpr u64 kMaxFixedScanPrime = 100'000'000;
constexpr u64 kMaxTableScanPrime = 1000;

std::int64_t elapsed_ms(Clock::time_point since) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - since).count();
}

std::string braces(const std::vector<u64>& values, char sep) {
    std::string s = "{";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(values[i]);
    }
    return s + "}";
}

std::string decimal(const Rational& r, int digits = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << r.value();
    return os.str();
}

std::string describe_witness(const NormWitness& witness) {
    std::ostringstream os;
    if (const auto* sq = std::get_if<RationalSquareWitness>(&witness.kind)) {
        os << "  witness: rational integer " << sq->root << " with norm " << sq->root << "^2\n";
        return os.str();
    }
    const auto& w = std::get<QuadraticWitness>(witness.kind);
    os << "  witness: t^2 + " << w.b << "t + " << witness.m << ", discriminant " << w.discriminant << "\n";
    for (const auto& cert : w.local_certificates) {
        os << "    at " << cert.place.to_string() << ": non-square (" << to_string(cert.reason);
        if (cert.unit_residue) os << ", unit residue " << *cert.unit_residue;
        os << ")\n";
    }
    return os.str();
}

Outcome cmd_check(i64 m, const std::string& spec) {
    const auto algebra = parse_algebra_spec(spec);
    Outcome o;
    o.report.algebra = to_json(algebra);
    std::ostringstream text;
    text << "m = " << m << " in " << algebra.canonical() << "\n";

    const auto gate = eichler_gate(algebra.profile());
    if (gate.no_outliers) {
        if (m <= 0) throw std::domain_error("not a norm: HMS positivity");
        o.report.results = json{{"m", m},          {"gate", gate.reason},         {"norm", true},
                                {"outlier", false}, {"witness", nullptr},         {"exhausted_search", nullptr}};
        text << "  norm of an integer: the algebra has no outliers (" << gate.reason << ")\n";
        o.text = text.str();
        return o;
    }

    const auto decision = decide_norm(m, algebra);
    o.report.results = to_json(decision);
    o.report.results["gate"] = nullptr;
    if (decision.is_norm) {
        text << "  norm of an integer\n" << describe_witness(*decision.witness);
    } else {
        const auto& search = *decision.exhausted;
        text << "  OUTLIER: no b in [0, " << search.b_max << "] gives a witness\n";
        for (const auto& c : search.candidates)
            text << "    b = " << c.b << ": d = " << c.discriminant << " is a square at " << c.square_at << "\n";
    }
    o.text = text.str();
    return o;
}

Outcome cmd_enumerate(const std::string& spec, std::optional<u64> band_factor, const Settings& settings) {
    const auto algebra = parse_algebra_spec(spec);
    auto classification = enumerate_base_outliers(algebra, settings.threads);
    if (band_factor) verify_band(classification, *band_factor, settings.threads);

    Outcome o;
    o.report.algebra = to_json(algebra);
    o.report.results = to_json(classification);

    std::ostringstream text;
    text << "algebra " << algebra.canonical() << "\n";
    if (classification.gate.no_outliers) {
        text << "no outliers: " << classification.gate.reason << "\n";
    } else {
        text << "C = " << classification.discriminant << ", M = " << classification.bound << "\n";
        text << "base outliers: " << braces(classification.base_outliers, ',') << "\n";
        if (!classification.base_outliers.empty()) text << "all outliers: " << classification.closure_rule() << "\n";
    }
    if (classification.band) {
        const auto& band = *classification.band;
        text << "band (" << band.lower << ", " << band.upper << "]: "
             << (band.new_outliers.empty() ? "no reduced outliers" : "NEW OUTLIERS " + braces(band.new_outliers, ','))
             << "\n";
    }
    o.text = text.str();

    std::ostringstream csv;
    csv << "C,M,base_outliers,band_upper,band_new_outliers\n";
    csv << classification.discriminant << "," << classification.bound << ","
        << braces(classification.base_outliers, ';') << ",";
    if (classification.band)
        csv << classification.band->upper << "," << braces(classification.band->new_outliers, ';');
    else
        csv << ",";
    csv << "\n";
    o.csv = csv.str();
    return o;
}

Outcome cmd_density(std::optional<u64> m, const std::optional<std::string>& expr_text, std::optional<u64> empirical,
                    const Settings& settings) {
    if (m.has_value() == expr_text.has_value()) throw UsageError("density: give exactly one of --m or --expr");
    ConditionExpr expr = m ? outlier_condition(*m) : parse_condition(*expr_text);
    const auto exact = exact_density(expr);

    Outcome o;
    o.report.results = to_json(exact);
    o.report.results["expression"] = expr.to_string();
    o.report.results["m"] = m ? json(*m) : json(nullptr);
    o.report.results["empirical"] = nullptr;

    std::ostringstream text;
    text << "expression: " << expr.to_string() << "\n";
    text << "basis:";
    for (const auto& c : exact.basis) text << " " << c.to_string();
    text << "\nrank " << exact.rank << ", satisfying " << exact.satisfying_count << " of " << (u64{1} << exact.rank)
         << "\n";
    text << "density = " << exact.density().to_string() << "\n";
    if (empirical) {
        if (*empirical < 100) throw UsageError("--empirical needs a prime bound of at least 100");
        const auto scan = empirical_density(expr, *empirical, settings.threads);
        o.report.results["empirical"] = to_json(scan);
        text << "empirical over odd primes <= " << *empirical << ": " << scan.satisfying << "/" << scan.sample_size
             << " = " << decimal(scan.fraction()) << " (exact " << decimal(exact.density()) << ")\n";
        if (!scan.excluded_primes.empty()) text << "excluded primes: " << braces(scan.excluded_primes, ',') << "\n";
    }
    o.text = text.str();
    return o;
}

Outcome cmd_scan(u64 max_prime, const std::string& mode, const Settings& settings) {
    if (max_prime < 10) throw UsageError("scan: --max-prime must be at least 10");

    std::optional<i64> fixed_m;
    if (mode.rfind("fixed-m:", 0) == 0) {
        try {
            std::size_t used = 0;
            fixed_m = std::stoll(mode.substr(8), &used);
            if (used != mode.size() - 8) throw std::invalid_argument("trailing text");
        } catch (const std::logic_error&) {
            throw UsageError("scan: bad mode '" + mode + "'");
        }
        if (max_prime > kMaxFixedScanPrime) throw UsageError("scan: fixed-m is capped at --max-prime 100000000");
    } else if (mode == "no-outliers" || mode == "base-sets") {
        if (max_prime > kMaxTableScanPrime)
            throw UsageError("scan: " + mode + " is capped at --max-prime 1000");
    } else {
        throw UsageError("scan: unknown mode '" + mode + "' (fixed-m:<m>, no-outliers, base-sets)");
    }

    struct Row {
        u64 r = 0;
        u64 bound = 0;
        bool outlier = false;
        std::vector<u64> base;
        std::int64_t ms = 0;
    };
    const auto primes = primes_up_to(max_prime);
    const auto rows = parallel_collect(0, primes.size(), settings.threads, [&](u64 lo, u64 hi) {
        std::vector<Row> out;
        for (u64 i = lo; i < hi; ++i) {
            const auto start = Clock::now();
            const auto algebra = QuaternionAlgebra::a_r(primes[i]);
            Row row;
            row.r = primes[i];
            row.bound = algebra.outlier_bound();
            if (fixed_m) {
                row.outlier = is_outlier(*fixed_m, algebra);
            } else {
                row.base = enumerate_base_outliers(algebra).base_outliers;
                row.outlier = !row.base.empty();
            }
            if (settings.timing) row.ms = elapsed_ms(start);
            out.push_back(std::move(row));
        }
        return out;
    });

    Outcome o;
    json table = json::array();
    u64 hits = 0;
    std::ostringstream csv;
    csv << "r,verdict-or-set,M,elapsed_ms\n";
    for (const auto& row : rows) {
        json entry{{"r", row.r}, {"M", row.bound}};
        if (fixed_m) {
            entry["outlier"] = row.outlier;
            csv << row.r << "," << (row.outlier ? "outlier" : "norm") << "," << row.bound << "," << row.ms << "\n";
            if (row.outlier) ++hits;
        } else {
            entry["base_outliers"] = row.base;
            entry["no_outliers"] = row.base.empty();
            csv << row.r << "," << braces(row.base, ';') << "," << row.bound << "," << row.ms << "\n";
            if (row.base.empty()) ++hits;
        }
        if (settings.timing) entry["elapsed_ms"] = row.ms;
        table.push_back(std::move(entry));
    }
    const auto fraction = Rational::reduced(hits, rows.empty() ? 1 : rows.size());
    const std::string mode_name = fixed_m ? "fixed-m" : mode;
    o.report.results = json{{"mode", mode_name},
                            {"m", fixed_m ? json(*fixed_m) : json(nullptr)},
                            {"max_prime", max_prime},
                            {"prime_count", rows.size()},
                            {"hit_count", hits},
                            {"fraction", to_json(fraction)},
                            {"rows", table}};
    o.csv = csv.str();

    std::ostringstream text;
    if (fixed_m) {
        text << "primes r <= " << max_prime << " with " << *fixed_m << " an outlier for A_r: " << hits << "/"
             << rows.size() << " = " << decimal(fraction) << "\n";
    } else {
        if (mode == "base-sets") {
            text << std::setw(8) << "r" << std::setw(10) << "M" << "  base outliers\n";
            for (const auto& row : rows)
                text << std::setw(8) << row.r << std::setw(10) << row.bound << "  " << braces(row.base, ',') << "\n";
        }
        text << "primes r <= " << max_prime << " with no outliers for A_r: " << hits << "/" << rows.size() << " = "
             << decimal(fraction) << "\n";
    }
    o.text = text.str();
    return o;
}

Outcome cmd_report(i64 m, u64 p) {
    const auto report = supersingular_report(m, p);
    Outcome o;
    o.report.algebra = to_json(QuaternionAlgebra::a_r(p));
    o.report.results = json{{"m", report.m},
                            {"p", report.p},
                            {"outlier", report.decision.outlier()},
                            {"endomorphism_exists", report.endomorphism_exists()},
                            {"text", report.text},
                            {"witness", report.decision.witness ? to_json(*report.decision.witness) : json(nullptr)}};
    o.text = report.text + "\n";
    return o;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reduced norms of integral elements of definite quaternion algebras over Q"};
    app.name("qnorm");
    app.require_subcommand(1);
    app.fallthrough();

    bool as_json = false, as_csv = false, timing = false;
    unsigned threads = default_threads();
    auto* json_flag = app.add_flag("--json", as_json, "Machine-readable JSON output");
    app.add_flag("--csv", as_csv, "CSV output (enumerate, scan)")->excludes(json_flag);
    app.add_flag("--timing", timing, "Record wall-clock timings in the output");
    app.add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 4096u));

    auto* check = app.add_subcommand("check", "Decide whether m is the reduced norm of an integer");
    i64 check_m = 0;
    std::string check_algebra;
    check->add_option("m", check_m, "Positive integer")->required();
    check->add_option("--algebra", check_algebra, "p:<prime> | ram:<p1,...> | sym:<a>,<b>")->required();

    auto* enumerate = app.add_subcommand("enumerate", "List the base outliers below the effective bound");
    std::string enum_algebra;
    std::optional<u64> band_factor;
    enumerate->add_option("--algebra", enum_algebra, "p:<prime> | ram:<p1,...> | sym:<a>,<b>")->required();
    enumerate->add_option("--verify-band", band_factor, "Also brute-force scan (M, k*M]")->check(CLI::Range(u64{1}, u64{1} << 20));

    auto* density = app.add_subcommand("density", "Exact Dirichlet density of an outlier condition");
    std::optional<u64> density_m;
    std::optional<std::string> density_expr;
    std::optional<u64> empirical;
    auto* m_opt = density->add_option("--m", density_m, "Non-square m: density of primes r with m an outlier for A_r");
    density->add_option("--expr", density_expr, "Condition expression")->excludes(m_opt);
    density->add_option("--empirical", empirical, "Compare with a scan of primes up to N");

    auto* scan = app.add_subcommand("scan", "Scan the algebras A_r over primes r");
    u64 max_prime = 0;
    std::string mode;
    scan->add_option("--max-prime", max_prime, "Largest prime r")->required();
    scan->add_option("--mode", mode, "fixed-m:<m> | no-outliers | base-sets")->required();

    auto* report = app.add_subcommand("report", "Supersingular elliptic curve reading of the verdict for A_p");
    i64 report_m = 0;
    u64 report_p = 0;
    report->add_option("m", report_m, "Endomorphism degree")->required();
    report->add_option("p", report_p, "Characteristic (prime)")->required();

    std::vector<const char*> argv{"qnorm"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    Settings settings;
    settings.format = as_json ? Format::json : as_csv ? Format::csv : Format::text;
    settings.threads = threads;
    settings.timing = timing;

    try {
        const auto start = Clock::now();
        Outcome outcome;
        if (*check) {
            outcome = cmd_check(check_m, check_algebra);
        } else if (*enumerate) {
            outcome = cmd_enumerate(enum_algebra, band_factor, settings);
        } else if (*density) {
            outcome = cmd_density(density_m, density_expr, empirical, settings);
        } else if (*scan) {
            outcome = cmd_scan(max_prime, mode, settings);
        } else {
            outcome = cmd_report(report_m, report_p);
        }
        outcome.report.command = args;
        if (settings.timing) outcome.report.wall_ms = elapsed_ms(start);

        switch (settings.format) {
            case Format::json: out << to_json(outcome.report).dump(2) << "\n"; break;
            case Format::csv:
                if (outcome.csv.empty()) throw UsageError("--csv is only available for enumerate and scan");
                out << outcome.csv;
                break;
            case Format::text:
                out << outcome.text;
                if (outcome.report.wall_ms) out << "wall time: " << *outcome.report.wall_ms << " ms\n";
                break;
        }
        return kExitOk;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomain;
    }
}

}  // namespace qnorm
