#include <json.hpp>
#include <stdexcept>

#include "pfmc/conic/program.hpp"

namespace pfmc::conic {

namespace {

using nlohmann::json;

json expr_to_json(const LinExpr& e) {
  json terms = json::array();
  for (const auto& t : e.terms()) terms.push_back({t.var, t.coef});
  return json{{"terms", terms}, {"const", e.constant()}};
}

LinExpr expr_from_json(const json& j) {
  LinExpr e(j.at("const").get<double>());
  for (const auto& t : j.at("terms")) e.add_term(t.at(0).get<VarIndex>(), t.at(1).get<double>());
  e.canonicalize();
  return e;
}

const char* kind_name(VariableInfo::Kind k) {
  switch (k) {
    case VariableInfo::Kind::Scalar: return "scalar";
    case VariableInfo::Kind::Matrix: return "matrix";
    case VariableInfo::Kind::Symmetric: return "symmetric";
  }
  return "scalar";
}

}  // namespace

std::string ConicProgram::to_json() const {
  json j;
  j["vars"] = json::array();
  for (const auto& v : vars_) {
    json jv{{"name", v.name}, {"kind", kind_name(v.kind)}, {"rows", v.rows}, {"cols", v.cols}};
    if (std::isfinite(v.lb)) jv["lb"] = v.lb;
    if (std::isfinite(v.ub)) jv["ub"] = v.ub;
    j["vars"].push_back(jv);
  }
  j["constraints"] = json::array();
  for (const auto& [id, c] : constraints_) {
    json jc;
    switch (c.kind) {
      case ConstraintKind::Equality:
        jc["type"] = "eq";
        jc["expr"] = expr_to_json(c.expr);
        break;
      case ConstraintKind::Inequality:
        jc["type"] = "ineq";
        jc["expr"] = expr_to_json(c.expr);
        break;
      case ConstraintKind::SecondOrderCone: {
        jc["type"] = "soc";
        jc["t"] = expr_to_json(c.soc_scalar);
        json vec = json::array();
        for (const auto& e : c.soc_vec) vec.push_back(expr_to_json(e));
        jc["vec"] = vec;
        break;
      }
      case ConstraintKind::PsdCone: {
        jc["type"] = "psd";
        jc["dim"] = c.psd_dim;
        json lower = json::array();
        for (const auto& e : c.psd_lower) lower.push_back(expr_to_json(e));
        jc["lower"] = lower;
        break;
      }
    }
    j["constraints"].push_back(jc);
  }
  j["objective"] = expr_to_json(objective_);
  return j.dump(2);
}

ConicProgram ConicProgram::from_json(const std::string& text) {
  json j = json::parse(text);
  ConicProgram prog;
  for (const auto& jv : j.at("vars")) {
    const std::string kind = jv.at("kind").get<std::string>();
    const std::string name = jv.at("name").get<std::string>();
    if (kind == "scalar") {
      // Re-adding bounds would duplicate the bound rows serialized below.
      ScalarVar v = prog.add_scalar(name);
      (void)v;
      if (jv.contains("lb")) prog.vars_.back().lb = jv.at("lb").get<double>();
      if (jv.contains("ub")) prog.vars_.back().ub = jv.at("ub").get<double>();
    } else if (kind == "matrix") {
      prog.add_matrix(name, jv.at("rows").get<int>(), jv.at("cols").get<int>());
    } else if (kind == "symmetric") {
      prog.add_symmetric(name, jv.at("rows").get<int>());
    } else {
      throw std::invalid_argument("unknown variable kind: " + kind);
    }
  }
  for (const auto& jc : j.at("constraints")) {
    const std::string type = jc.at("type").get<std::string>();
    if (type == "eq") {
      prog.add_equality(expr_from_json(jc.at("expr")));
    } else if (type == "ineq") {
      prog.add_inequality(expr_from_json(jc.at("expr")));
    } else if (type == "soc") {
      std::vector<LinExpr> vec;
      for (const auto& e : jc.at("vec")) vec.push_back(expr_from_json(e));
      prog.add_soc(expr_from_json(jc.at("t")), std::move(vec));
    } else if (type == "psd") {
      const int dim = jc.at("dim").get<int>();
      MatExpr m(dim, dim);
      size_t idx = 0;
      const auto& lower = jc.at("lower");
      for (int col = 0; col < dim; ++col) {
        for (int row = col; row < dim; ++row) {
          LinExpr e = expr_from_json(lower.at(idx++));
          m.at(row, col) = e;
          m.at(col, row) = e;
        }
      }
      prog.add_psd(m);
    } else {
      throw std::invalid_argument("unknown constraint type: " + type);
    }
  }
  prog.set_objective(expr_from_json(j.at("objective")));
  return prog;
}

}  // namespace pfmc::conic
