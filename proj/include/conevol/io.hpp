#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "conevol/bounds.hpp"
#include "conevol/forms.hpp"
#include "conevol/membership.hpp"
#include "conevol/volume.hpp"

namespace conevol {

using json = nlohmann::ordered_json;

/// Form interchange schema:
/// {"n": int, "degree": int, "terms": [{"exp": [int,...], "coef": float}, ...]}
/// Terms are emitted in lexicographic exponent order.
inline json form_to_json(const Form& p) {
    json terms = json::array();
    for (const auto& [alpha, c] : p.terms()) {
        terms.push_back({{"exp", alpha}, {"coef", c}});
    }
    return {{"n", p.n_vars()}, {"degree", p.degree()}, {"terms", terms}};
}

inline Form form_from_json(const json& j) {
    int n = j.at("n").get<int>();
    int degree = j.at("degree").get<int>();
    std::vector<std::pair<ExponentVec, double>> terms;
    for (const auto& t : j.at("terms")) {
        terms.emplace_back(t.at("exp").get<ExponentVec>(), t.at("coef").get<double>());
    }
    return Form::from_terms(n, degree, terms);
}

inline json volume_to_json(const VolumeEstimate& e) {
    return {
        {"estimator",
         {{"power_mean_root", e.power_mean_root},
          {"inverse_mean", e.inverse_mean},
          {"harmonic_mean", e.harmonic_mean}}},
        {"ci", {e.ci_low, e.ci_high}},
        {"samples", e.samples},
        {"seed", e.seed},
        {"dim", e.dim},
        {"flagged_fraction", e.flagged_fraction},
    };
}

inline json bound_report_to_json(const BoundReport& r) {
    return {
        {"n", r.n},
        {"d", r.d},
        {"dim_P", r.dim_P},
        {"D_M", r.D_M},
        {"D_bi", r.D_bi},
        {"dim_M_bi", r.dim_M_bi},
        {"k", r.k},
        {"alpha_k", r.alpha_k},
        {"alpha_numeric", r.alpha_numeric},
        {"theorem1_bound", r.theorem1_bound},
        {"theorem2_bound", r.theorem2_bound},
        {"theorem2_bound_mbi", r.theorem2_bound_mbi},
        {"metric_ratio", r.metric_ratio},
        {"reference_exponents", {r.reference_exponent_pos, r.reference_exponent_sq}},
    };
}

inline const char* sos_status_name(SosStatus s) {
    switch (s) {
        case SosStatus::Feasible: return "feasible";
        case SosStatus::Infeasible: return "infeasible";
        case SosStatus::Undecided: return "undecided";
    }
    return "undecided";
}

/// Gram matrix is row-major over the lexicographic degree-d monomial basis.
inline json certificate_to_json(const GramCertificate& cert) {
    json gram = json::array();
    for (int i = 0; i < cert.gram.rows(); ++i)
        for (int j = 0; j < cert.gram.cols(); ++j) gram.push_back(cert.gram(i, j));
    return {
        {"status", sos_status_name(cert.status)},
        {"basis", cert.basis},
        {"gram", gram},
        {"affine_residual", cert.affine_residual},
        {"min_eigenvalue", cert.min_eigenvalue},
        {"iterations", cert.iterations},
        {"gap_estimate", cert.gap_estimate},
    };
}

} // namespace conevol
