#include "caver/causal/json_io.hpp"

#include <fstream>

namespace caver::causal {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::SyntaxError, path + ": " + e.what());
  }
  return j;
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::IoError, "cannot write " + path);
  out << j.dump(2) << '\n';
}

namespace {

std::vector<Variable> read_domains(const json& obj, VarKind kind, const char* section) {
  if (!obj.is_object()) fail(ErrorKind::InvalidModel, std::string(section) + " must be an object");
  std::vector<Variable> out;
  for (const auto& [name, dom] : obj.items()) {
    if (!dom.is_array() || dom.empty())
      fail(ErrorKind::InvalidModel, "domain of " + name + " must be a nonempty array");
    Variable v{name, kind, {}};
    for (const auto& d : dom) {
      if (!d.is_string())
        fail(ErrorKind::InvalidModel, "domain values of " + name + " must be strings");
      v.domain.push_back(d.get<std::string>());
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

CausalModel model_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorKind::InvalidModel, "model file must be a JSON object");
  if (!j.contains("exogenous") || !j.contains("endogenous") || !j.contains("equations"))
    fail(ErrorKind::InvalidModel, "model file needs exogenous, endogenous and equations");

  Signature sig(read_domains(j.at("exogenous"), VarKind::Exogenous, "exogenous"),
                read_domains(j.at("endogenous"), VarKind::Endogenous, "endogenous"));

  std::map<std::string, Equation> eqs;
  for (const auto& [name, spec] : j.at("equations").items()) {
    if (spec.is_string()) {
      eqs.emplace(name, Equation::expression(spec.get<std::string>()));
    } else if (spec.is_object()) {
      if (!spec.contains("inputs") || !spec.contains("rows"))
        fail(ErrorKind::InvalidModel, "table for " + name + " needs inputs and rows");
      std::vector<std::string> inputs;
      for (const auto& in : spec.at("inputs")) inputs.push_back(in.get<std::string>());
      std::map<std::string, std::string> rows;
      for (const auto& [key, val] : spec.at("rows").items()) {
        if (!val.is_string())
          fail(ErrorKind::InvalidModel, "table row values for " + name + " must be strings");
        rows[key] = val.get<std::string>();
      }
      eqs.emplace(name, Equation::table(std::move(inputs), std::move(rows)));
    } else {
      fail(ErrorKind::InvalidModel, "equation for " + name + " must be a string or a table");
    }
  }

  std::map<std::string, Context> presets;
  if (j.contains("contexts")) {
    for (const auto& [cname, ctx] : j.at("contexts").items()) {
      Context c;
      for (const auto& [var, val] : ctx.items()) {
        if (!val.is_string())
          fail(ErrorKind::InvalidModel, "context " + cname + " values must be strings");
        c[var] = val.get<std::string>();
      }
      presets.emplace(cname, std::move(c));
    }
  }

  return CausalModel(std::move(sig), std::move(eqs), std::move(presets));
}

json model_to_json(const CausalModel& model) {
  const Signature& sig = model.signature();
  json j = json::object();
  json exo = json::object(), endo = json::object();
  for (VarId v = 0; v < sig.num_vars(); ++v) {
    json dom = json::array();
    for (const auto& d : sig.variable(v).domain) dom.push_back(d);
    (sig.is_exogenous(v) ? exo : endo)[sig.variable(v).name] = std::move(dom);
  }
  j["exogenous"] = std::move(exo);
  j["endogenous"] = std::move(endo);

  json eqs = json::object();
  for (VarId v = sig.first_endogenous(); v < sig.num_vars(); ++v) {
    const std::string& name = sig.variable(v).name;
    const Equation& eq = model.functions().at(name);
    switch (eq.kind) {
      case Equation::Kind::Expr:
        eqs[name] = eq.expr->str();
        break;
      case Equation::Kind::Table: {
        json t = json::object();
        t["inputs"] = eq.inputs;
        json rows = json::object();
        for (const auto& [key, val] : eq.rows) rows[key] = val;
        t["rows"] = std::move(rows);
        eqs[name] = std::move(t);
        break;
      }
      case Equation::Kind::Native:
        fail(ErrorKind::InvalidModel, "equation for " + name + " is native code, not serializable");
    }
  }
  j["equations"] = std::move(eqs);

  if (!model.named_contexts().empty()) {
    json ctxs = json::object();
    for (const auto& [cname, ctx] : model.named_contexts()) {
      json c = json::object();
      for (const auto& [var, val] : ctx) c[var] = val;
      ctxs[cname] = std::move(c);
    }
    j["contexts"] = std::move(ctxs);
  }
  return j;
}

CausalModel load_model(const std::string& path) { return model_from_json(read_json_file(path)); }

void save_model(const CausalModel& model, const std::string& path) {
  write_json_file(model_to_json(model), path);
}

}  // namespace caver::causal
