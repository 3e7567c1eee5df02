#pragma once
#ifndef TRISECANT_POLY_JSON_HPP
#define TRISECANT_POLY_JSON_HPP

// JSON form of a polynomial:
//   {"blocks":[sizes], "multidegree":[d..]|null,
//    "terms":[{"exp":[e..], "re":num|"p/q", "im":num|"p/q"}]}
// Exact coefficients are written as strings, floating ones as numbers.

#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"
#include "trisecant/poly.hpp"

namespace trisecant {

using Json = nlohmann::ordered_json;

namespace detail {

inline Rational json_to_rational(const Json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number()) return rational_from_double(v.get<double>());
  throw InputError("coefficient must be a number or a \"p/q\" string");
}

inline double json_to_double(const Json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>()).get_d();
  if (v.is_number()) return v.get<double>();
  throw InputError("coefficient must be a number or a \"p/q\" string");
}

template <class C>
C coefficient_from_json(const Json& term) {
  const Json zero = 0;
  const Json& re = term.contains("re") ? term.at("re") : zero;
  const Json& im = term.contains("im") ? term.at("im") : zero;
  if constexpr (std::is_same_v<C, Complex>) {
    return {json_to_double(re), json_to_double(im)};
  } else if constexpr (std::is_same_v<C, GaussRational>) {
    return {json_to_rational(re), json_to_rational(im)};
  } else {
    static_assert(std::is_same_v<C, Rational>);
    if (sgn(json_to_rational(im)) != 0) throw InputError("complex coefficient in a real exact polynomial");
    return json_to_rational(re);
  }
}

template <class C>
void coefficient_to_json(const C& c, Json& term) {
  if constexpr (std::is_same_v<C, Complex>) {
    term["re"] = c.real();
    term["im"] = c.imag();
  } else if constexpr (std::is_same_v<C, GaussRational>) {
    term["re"] = to_string(c.re);
    term["im"] = to_string(c.im);
  } else {
    term["re"] = to_string(c);
    term["im"] = "0";
  }
}

}  // namespace detail

template <class C>
Json to_json(const MultiPoly<C>& p) {
  Json j;
  j["blocks"] = p.blocks().sizes();
  if (p.declared_multidegree())
    j["multidegree"] = *p.declared_multidegree();
  else
    j["multidegree"] = nullptr;
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) {
    Json t;
    t["exp"] = e;
    detail::coefficient_to_json(c, t);
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

template <class C>
MultiPoly<C> poly_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("blocks") || !j.contains("terms"))
    throw InputError("polynomial JSON needs \"blocks\" and \"terms\"");
  VarBlocks blocks(j.at("blocks").get<std::vector<std::size_t>>());
  MultiPoly<C> p(blocks);
  for (const auto& t : j.at("terms")) {
    auto e = t.at("exp").get<Exponent>();
    if (e.size() != blocks.total()) throw InputError("exponent length does not match blocks");
    p.add_term(std::move(e), detail::coefficient_from_json<C>(t));
  }
  if (j.contains("multidegree") && !j.at("multidegree").is_null())
    p.declare_multidegree(j.at("multidegree").get<std::vector<unsigned>>());
  return p;
}

template <class C>
Json to_json(const PolySystem<C>& sys) {
  Json j;
  j["blocks"] = sys.blocks().sizes();
  Json eqs = Json::array();
  for (const auto& f : sys.equations()) eqs.push_back(to_json(f));
  j["equations"] = std::move(eqs);
  return j;
}

template <class C>
PolySystem<C> system_from_json(const Json& j) {
  VarBlocks blocks(j.at("blocks").get<std::vector<std::size_t>>());
  std::vector<MultiPoly<C>> eqs;
  for (const auto& e : j.at("equations")) eqs.push_back(poly_from_json<C>(e));
  return {blocks, std::move(eqs)};
}

}  // namespace trisecant

#endif  // TRISECANT_POLY_JSON_HPP
