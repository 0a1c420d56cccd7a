#pragma once

// JSON forms for the CLI. Every rational travels as an exact string
// ("num" or "num/den"); plain JSON integers are accepted on input for
// convenience, floating-point numbers never are. Serialization uses
// insertion-ordered objects so identical runs emit identical bytes.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "genus.hpp"
#include "matrix.hpp"
#include "pipeline.hpp"
#include "primes.hpp"
#include "rational.hpp"

namespace geneq {

using Json = nlohmann::ordered_json;

inline Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw std::invalid_argument("json: rationals must be strings or integers, not floats");
}

inline RatMatrix matrix_from_json(const Json& j, const std::string& name) {
    if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
        throw std::invalid_argument("json: '" + name + "' must be a nonempty array of arrays");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    RatMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw std::invalid_argument("json: '" + name + "' is ragged");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rational_from_json(j[r][c]);
    }
    return m;
}

inline Json matrix_to_json(const RatMatrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(format_rational(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<Prime> primes_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("json: 'primes' must be an array");
    std::vector<Prime> ps;
    for (const Json& e : j) {
        if (!e.is_number_integer() || e.get<long long>() < 2)
            throw std::invalid_argument("json: primes must be integers at least 2");
        ps.push_back(static_cast<Prime>(e.get<unsigned long long>()));
    }
    return ps;
}

struct ProblemInput {
    RatMatrix f, g;
    std::optional<RatMatrix> sigma, diagonalizer;
    std::vector<Prime> primes;  // may be empty; the CLI can override
};

inline ProblemInput problem_from_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("json: input must be an object");
    if (!j.contains("F") || !j.contains("G"))
        throw std::invalid_argument("json: input needs 'F' and 'G'");
    ProblemInput in{matrix_from_json(j.at("F"), "F"), matrix_from_json(j.at("G"), "G"),
                    std::nullopt, std::nullopt, {}};
    if (j.contains("sigma")) in.sigma = matrix_from_json(j.at("sigma"), "sigma");
    if (j.contains("Sigma")) in.diagonalizer = matrix_from_json(j.at("Sigma"), "Sigma");
    if (j.contains("primes")) in.primes = primes_from_json(j.at("primes"));
    return in;
}

inline Json constants_to_json(const AvoidanceConstants& c) {
    Json per = Json::object();
    for (const auto& [p, pa] : c.per_prime) {
        Json e = Json::object();
        e["kappa"] = format_rational(pa.kappa);
        e["alpha"] = pa.alpha.get_str();
        e["beta"] = format_rational(pa.beta);
        e["ell"] = pa.ell;
        per[std::to_string(p)] = e;
    }
    Json out = Json::object();
    out["per_prime"] = per;
    out["eps"] = format_rational(c.eps);
    out["d"] = c.d.get_str();
    out["C"] = c.C.get_str();
    return out;
}

inline Json report_to_json(const VerificationReport& r) {
    Json integral = Json::object(), unit = Json::object();
    for (const auto& [p, ok] : r.integral) integral[std::to_string(p)] = ok;
    for (const auto& [p, ok] : r.unit_det) unit[std::to_string(p)] = ok;
    Json out = Json::object();
    out["congruence"] = r.congruence;
    out["integral"] = integral;
    out["unit_determinant"] = unit;
    out["all"] = r.all_ok();
    return out;
}

inline Json certificate_to_json(const EquivalenceCertificate& cert) {
    Json out = Json::object();
    out["F"] = matrix_to_json(cert.f);
    out["G"] = matrix_to_json(cert.g);
    Json primes = Json::array();
    for (Prime p : cert.primes) primes.push_back(p);
    out["primes"] = primes;
    out["sigma"] = matrix_to_json(cert.sigma);
    out["Sigma"] = matrix_to_json(cert.diagonalizer);
    out["tau_hat"] = matrix_to_json(cert.tau_hat);
    out["U"] = matrix_to_json(cert.u);
    Json signs = Json::object();
    for (const auto& [p, e] : cert.sign_choices) {
        Json diag = Json::array();
        for (int s : e.diag) diag.push_back(s);
        signs[std::to_string(p)] = diag;
    }
    out["sign_choices"] = signs;
    out["constants"] = constants_to_json(cert.constants);
    out["checks"] = report_to_json(cert.checks);
    return out;
}

struct CertificateInput {
    RatMatrix f, g;
    std::vector<Prime> primes;
    RatMatrix tau_hat;
};

inline CertificateInput certificate_from_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("json: certificate must be an object");
    for (const char* key : {"F", "G", "primes", "tau_hat"})
        if (!j.contains(key))
            throw std::invalid_argument(std::string("json: certificate needs '") + key + "'");
    return CertificateInput{matrix_from_json(j.at("F"), "F"), matrix_from_json(j.at("G"), "G"),
                            primes_from_json(j.at("primes")),
                            matrix_from_json(j.at("tau_hat"), "tau_hat")};
}

inline Json genus_report_to_json(const GenusReport& r) {
    Json places = Json::array();
    for (const PlaceReport& pl : r.places) {
        Json e = Json::object();
        e["place"] = pl.name();
        e["ok"] = pl.ok;
        places.push_back(e);
    }
    Json out = Json::object();
    out["same_genus"] = r.same;
    out["places"] = places;
    return out;
}

}  // namespace geneq
