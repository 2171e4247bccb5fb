#pragma once

/* JSON/CSV serialization and instance parsing.
 *
 * Conventions: rationals serialize as canonical reduced strings "p/q" ("p"
 * when the denominator is 1) and round-trip through parse_rational;
 * polynomials serialize as arrays of such strings with index = exponent;
 * algebraic numbers as {"exact"?, "lo", "hi"}; infinite endpoints as "inf".
 * Doubles in CSV are printed with "%.17g" so output is byte-stable. */

#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hyperzero/certify.hpp"
#include "hyperzero/interval.hpp"
#include "hyperzero/theta.hpp"

namespace hyperzero {

using json = nlohmann::json;

struct InstanceSpec {
    std::vector<Rational> roots;
    Rational leading = 1;
    int r = 1;
};

inline ProblemInstance instance_from_spec(const InstanceSpec &spec) {
    return make_instance(spec.roots, spec.leading, spec.r);
}

/* Parse {"roots":[...], "leading":"p/q" (default "1"), "r":int}, collecting
 * every violated requirement into one error message. */
inline InstanceSpec parse_instance(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception &e) {
        throw parse_error(std::string("instance: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw parse_error("instance: top-level JSON object required");

    InstanceSpec spec;
    std::vector<std::string> violations;
    auto complain = [&](std::string msg) { violations.push_back(std::move(msg)); };

    if (!doc.contains("roots") || !doc["roots"].is_array() || doc["roots"].empty()) {
        complain("\"roots\" must be a nonempty array of rational strings");
    } else {
        size_t idx = 0;
        for (const auto &item : doc["roots"]) {
            ++idx;
            if (!item.is_string() && !item.is_number_integer()) {
                complain("root #" + std::to_string(idx) + " must be a rational string");
                continue;
            }
            try {
                Rational root = item.is_string() ? parse_rational(item.get<std::string>())
                                                 : Rational((long)item.get<long>());
                if (root <= 0)
                    complain("root #" + std::to_string(idx) + " must be positive");
                else
                    spec.roots.push_back(root);
            } catch (const parse_error &e) {
                complain("root #" + std::to_string(idx) + ": " + e.what());
            }
        }
    }

    if (doc.contains("leading")) {
        const auto &lead = doc["leading"];
        if (!lead.is_string() && !lead.is_number_integer()) {
            complain("\"leading\" must be a rational string");
        } else {
            try {
                spec.leading = lead.is_string() ? parse_rational(lead.get<std::string>())
                                                : Rational((long)lead.get<long>());
                if (spec.leading <= 0) complain("\"leading\" must be positive");
            } catch (const parse_error &e) {
                complain(std::string("\"leading\": ") + e.what());
            }
        }
    }

    if (doc.contains("r")) {
        if (!doc["r"].is_number_integer()) {
            complain("\"r\" must be a positive integer");
        } else {
            long r = doc["r"].get<long>();
            if (r < 1)
                complain("\"r\" must be >= 1");
            else
                spec.r = (int)r;
        }
    }

    if (violations.empty() && (int)spec.roots.size() == 1 && spec.r == 1)
        complain("hypothesis max(deg P, r) > 1 violated (deg P = 1, r = 1)");

    if (!violations.empty()) {
        std::string msg = "instance: ";
        for (size_t i = 0; i < violations.size(); ++i) {
            if (i) msg += "; ";
            msg += violations[i];
        }
        throw validation_error(msg);
    }
    return spec;
}

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline json poly_to_json(const ExactPolynomial &p) {
    json arr = json::array();
    for (const auto &c : p.coeffs) arr.push_back(to_string(c));
    return arr;
}

inline json critical_point_to_json(const CriticalPoint &cp) {
    json obj;
    if (cp.exact) obj["exact"] = to_string(*cp.exact);
    obj["lo"] = to_string(cp.lo);
    obj["hi"] = to_string(cp.hi);
    return obj;
}

inline json endpoint_to_json(const Endpoint &e) {
    if (e.is_infinite) return json("inf");
    json obj;
    if (e.exact) obj["exact"] = to_string(*e.exact);
    obj["lo"] = to_string(e.lo);
    obj["hi"] = to_string(e.hi);
    return obj;
}

inline json interval_report_to_json(const IntervalReport &rep) {
    json obj;
    obj["R"] = poly_to_json(rep.R);
    obj["t_a"] = critical_point_to_json(rep.t_a);
    obj["t_b"] = critical_point_to_json(rep.t_b);
    obj["a"] = endpoint_to_json(rep.a);
    obj["b"] = endpoint_to_json(rep.b);
    return obj;
}

inline json certificate_to_json(const HyperbolicityCertificate &c) {
    json obj;
    obj["m"] = c.m;
    obj["degree"] = c.degree;
    obj["distinct_real_roots"] = c.distinct_real_roots;
    obj["is_squarefree"] = c.is_squarefree;
    obj["roots_in_interval"] = c.roots_in_interval;
    obj["roots_outside"] = c.roots_outside;
    obj["indeterminate"] = c.indeterminate;
    obj["verdict"] = verdict_name(c.verdict);
    return obj;
}

inline json conjecture2_row_to_json(const Conjecture2Row &row) {
    json obj;
    obj["m"] = row.m;
    obj["degree"] = row.degree;
    obj["distinct_real_roots"] = row.distinct_real_roots;
    obj["all_real"] = row.all_real;
    return obj;
}

inline json density_profile_to_json(const DensityProfile &p) {
    json obj;
    obj["m_start"] = p.m_start;
    obj["m_max"] = p.m_max;
    obj["lo"] = p.lo;
    obj["hi"] = p.hi;
    obj["zero_count"] = p.zero_multiset.size();
    obj["max_gap"] = p.max_gap;
    obj["coverage_fraction"] = p.coverage_fraction;
    obj["zeros"] = p.zero_multiset;
    return obj;
}

inline std::string theta_grid_csv(const ThetaGrid &grid) {
    std::string out;
    if (!grid.calibration_note.empty()) out += "# " + grid.calibration_note + "\n";
    out += "theta,tau,z,A,B,min_excess";
    bool with_h = grid.h_calibration.has_value();
    if (with_h) out += ",h_value";
    out += "\n";
    for (const auto &row : grid.rows) {
        out += format_double(row.theta);
        out += ',';
        out += format_double(row.tau);
        out += ',';
        out += format_double(row.z);
        out += ',';
        out += format_double(row.A);
        out += ',';
        out += format_double(row.B);
        out += ',';
        out += format_double(row.min_excess);
        if (with_h) {
            out += ',';
            out += format_double(row.h.value_or(0.0));
        }
        out += "\n";
    }
    return out;
}

}  // namespace hyperzero
