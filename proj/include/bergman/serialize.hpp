#ifndef BERGMAN_SERIALIZE_HPP_
#define BERGMAN_SERIALIZE_HPP_

#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bergman/expression.hpp"
#include "bergman/interpolation.hpp"
#include "bergman/operator_lab.hpp"

namespace bergman {

using json = nlohmann::ordered_json;

inline constexpr real kLog10Low = -300;
inline constexpr real kLog10High = 300;

/// {log10_magnitude, phase}.
inline json log_polar_json(real log_abs, real phase) {
  json j;
  if (log_abs == kNegInf) {
    j["log10_magnitude"] = nullptr;
    j["phase"] = 0.0;
    return j;
  }
  j["log10_magnitude"] = static_cast<double>(log_abs / std::log(real(10)));
  j["phase"] = static_cast<double>(phase);
  return j;
}

/// Plain number, or {log10_magnitude, sign} outside [1e-300, 1e300].
inline json real_json(real x) {
  if (std::isnan(x)) return nullptr;
  if (x == 0) return 0.0;
  const real l = std::log10(std::abs(x));
  if (l >= kLog10Low && l <= kLog10High) return static_cast<double>(x);
  return json{{"log10_magnitude", static_cast<double>(l)}, {"sign", x < 0 ? -1 : 1}};
}

/// Log-domain positive quantity: plain number when it fits, else {log10_magnitude}.
inline json log_real_json(real log_value) {
  if (log_value == kNegInf) return 0.0;
  if (std::isnan(log_value)) return nullptr;
  const real l = log_value / std::log(real(10));
  if (l >= kLog10Low && l <= kLog10High) return static_cast<double>(std::exp(log_value));
  return json{{"log10_magnitude", static_cast<double>(l)}};
}

/// {re, im}, or {log10_magnitude, phase} outside [1e-300, 1e300].
inline json complex_json(cplx c) {
  const real a = std::abs(c);
  if (a == 0) return json{{"re", 0.0}, {"im", 0.0}};
  const real l = std::log10(a);
  if (l >= kLog10Low && l <= kLog10High)
    return json{{"re", static_cast<double>(c.real())}, {"im", static_cast<double>(c.imag())}};
  return log_polar_json(std::log(a), std::arg(c));
}

inline json params_json(const SpaceParams& sp) {
  return json{{"p", sp.sup_norm() ? json("inf") : json(static_cast<double>(sp.p))},
              {"alpha", static_cast<double>(sp.alpha)}};
}

/// Node type tag plus children.
inline json to_json(const AnalyticFn& f) {
  return std::visit(
      [](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        json j;
        if constexpr (std::is_same_v<T, AnalyticFn::Polynomial>) {
          j["type"] = "Polynomial";
          j["coefficients"] = json::array();
          for (const cplx& c : n.coeffs) j["coefficients"].push_back(complex_json(c));
        } else if constexpr (std::is_same_v<T, AnalyticFn::Kernel>) {
          j["type"] = "Kernel";
          j["m"] = real_json(n.m);
          j["lambda"] = complex_json(n.lambda);
          j["params"] = params_json(n.params);
        } else if constexpr (std::is_same_v<T, AnalyticFn::Blaschke>) {
          j["type"] = "Blaschke";
          j["zeros"] = json::array();
          for (const auto& z : n.product.zeros())
            j["zeros"].push_back(json{{"point", complex_json(z.point)}, {"multiplicity", z.multiplicity}});
        } else if constexpr (std::is_same_v<T, AnalyticFn::Mobius>) {
          j["type"] = "Mobius";
          j["center"] = complex_json(n.map.center());
          j["rotation"] = complex_json(n.map.rotation());
        } else if constexpr (std::is_same_v<T, AnalyticFn::PreCompose>) {
          j["type"] = "PreCompose";
          j["inner"] = json{{"center", complex_json(n.inner.center())}, {"rotation", complex_json(n.inner.rotation())}};
          j["outer"] = to_json(n.outer[0]);
        } else if constexpr (std::is_same_v<T, AnalyticFn::Compose>) {
          j["type"] = "Compose";
          j["inner"] = to_json(n.parts[0]);
          j["outer"] = to_json(n.parts[1]);
        } else if constexpr (std::is_same_v<T, AnalyticFn::Scale>) {
          j["type"] = "Scale";
          j["factor"] = complex_json(n.factor);
          j["child"] = to_json(n.child[0]);
        } else if constexpr (std::is_same_v<T, AnalyticFn::Sum>) {
          j["type"] = "Sum";
          j["terms"] = json::array();
          for (const auto& t : n.terms) j["terms"].push_back(to_json(t));
        } else if constexpr (std::is_same_v<T, AnalyticFn::Product>) {
          j["type"] = "Product";
          j["factors"] = json::array();
          for (const auto& t : n.factors) j["factors"].push_back(to_json(t));
        } else {
          j["type"] = "Quotient";
          j["numerator"] = to_json(n.parts[0]);
          j["denominator"] = to_json(n.parts[1]);
        }
        return j;
      },
      f.node());
}

inline json norm_json(const NormEstimate& n) {
  json j;
  j["log10_value"] = std::isfinite(n.log_value) ? json(static_cast<double>(n.log_value / std::log(real(10)))) : json(nullptr);
  j["value"] = log_real_json(n.log_value);
  j["resolved"] = n.resolved;
  j["method"] = n.method;
  if (!n.diagnostic.empty()) j["diagnostic"] = n.diagnostic;
  return j;
}

inline json to_json(const InterpolationProblem& pb, const InterpolationResult& r) {
  json j;
  j["points"] = json::array();
  for (const cplx& p : pb.points) j["points"].push_back(complex_json(p));
  j["J"] = pb.J;
  j["params"] = params_json(pb.params);
  j["case"] = to_string(r.kind);
  j["log10_target"] = static_cast<double>(r.log_target / std::log(real(10))) + 0.0;
  if (r.m_seq) {
    json ms;
    ms["strategy"] = to_string(r.m_seq->strategy);
    ms["m"] = json::array();
    for (real m : r.m_seq->m) ms["m"].push_back(real_json(m));
    ms["margins"] = json::array();
    for (real x : m_condition_margins(*r.m_seq)) ms["margins"].push_back(static_cast<double>(x));
    j["m_sequence"] = ms;
  }
  if (r.calibration) {
    j["calibration"] = json{{"R", static_cast<double>(r.calibration->R)},
                            {"epsilon", real_json(r.calibration->epsilon)},
                            {"exponent", real_json(r.calibration->exponent)},
                            {"halvings", r.calibration->halvings}};
  }
  j["coefficients"] = json::array();
  for (const cplx& c : r.coefficients)
    j["coefficients"].push_back(log_polar_json(c == cplx{0} ? kNegInf : std::log(std::abs(c)), std::arg(c)));
  if (!r.gershgorin_margins.empty()) {
    j["gershgorin_margins"] = json::array();
    for (real x : r.gershgorin_margins) j["gershgorin_margins"].push_back(real_json(x));
  }
  json diag;
  diag["log10_abs_det"] = static_cast<double>(r.log_abs_det / std::log(real(10)));
  diag["inverse_norm"] = real_json(r.inverse_norm);
  diag["inverse_norm_bound"] = real_json(r.inverse_norm_bound);
  if (r.kind == CaseTag::general) {
    diag["pigeonhole_L"] = r.pigeonhole_L;
    diag["near"] = r.near;
    diag["far"] = r.far;
  }
  if (r.annihilator) {
    diag["annihilator_sup"] = real_json(r.annihilator->sup_estimate);
    diag["annihilator_min_far_image"] = real_json(r.annihilator->min_abs_far_image);
  }
  j["diagnostics"] = diag;
  j["jets"] = json::array();
  for (const auto& jc : r.jets) {
    json e = log_polar_json(jc.log_abs_value, jc.phase);
    e["index"] = jc.index;
    e["relative_error"] = real_json(jc.error);
    j["jets"].push_back(e);
  }
  j["max_contract_error"] = real_json(r.max_contract_error);
  j["contract_ok"] = r.contract_ok;
  j["norm"] = norm_json(r.norm);
  j["expression"] = to_expression(r.f);
  j["f"] = to_json(r.f);
  return j;
}

inline json to_json(const OrderBoundedReport& r) {
  json j;
  j["verdict"] = to_string(r.verdict);
  if (r.verdict == Verdict::yes) j["value"] = real_json(r.value);
  if (r.verdict == Verdict::no) j["growth_exponent"] = real_json(r.growth_exponent);
  j["shells"] = json::array();
  for (std::size_t i = 0; i < r.radii.size(); ++i)
    j["shells"].push_back(json{{"radius", static_cast<double>(r.radii[i])}, {"partial", real_json(r.partials[i])}});
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j;
}

inline json to_json(const CompactnessProfile& p) {
  json j;
  j["verdict"] = to_string(p.compact);
  j["u_bounded"] = to_string(p.u_bounded);
  j["limit_zero"] = to_string(p.limit_zero);
  j["sup_phi"] = static_cast<double>(p.sup_phi);
  j["sup_u"] = real_json(p.sup_u);
  j["ratio_profile"] = json::array();
  for (const auto& row : p.rows)
    j["ratio_profile"].push_back(json{{"threshold", static_cast<double>(row.threshold)},
                                      {"sup_ratio", real_json(row.sup_ratio)},
                                      {"samples", row.samples}});
  if (!p.diagnostic.empty()) j["diagnostic"] = p.diagnostic;
  return j;
}

inline json to_json(const SequenceCheck& s) {
  json j;
  j["mode"] = s.mode;
  j["consistent"] = s.consistent;
  j["sequence"] = json::array();
  for (std::size_t i = 0; i < s.log_values.size(); ++i)
    j["sequence"].push_back(json{{"parameter", static_cast<double>(s.parameters[i])},
                                 {"log10_value", static_cast<double>(s.log_values[i] / std::log(real(10)))}});
  return j;
}

}  // namespace bergman

#endif  // BERGMAN_SERIALIZE_HPP_
