/* Copyright 2026 The honesty-lab Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
======================================================================== */

#include "honesty/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace honesty {

using nlohmann::json;

namespace {

void only_fields(const json &j, std::initializer_list<const char *> allowed,
                 const std::string &where) {
  if (!j.is_object())
    throw SchemaError(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto &[key, _] : j.items())
    if (!ok.count(key))
      throw SchemaError(where + ": unknown field '" + key + "'");
}

const json &field(const json &j, const char *key, const std::string &where) {
  auto it = j.find(key);
  if (it == j.end())
    throw SchemaError(where + ": missing field '" + key + "'");
  return *it;
}

double number(const json &j, const std::string &where) {
  if (!j.is_number())
    throw SchemaError(where + ": expected a number");
  return j.get<double>();
}

std::string kind_of(const json &j, const std::string &where) {
  const json &k = field(j, "kind", where);
  if (!k.is_string())
    throw SchemaError(where + ": 'kind' must be a string");
  return k.get<std::string>();
}

RateFn parse_power(const json &j, const std::string &where) {
  only_fields(j, {"kind", "c", "p"}, where);
  if (kind_of(j, where) != "power")
    throw SchemaError(where + ": expected kind 'power'");
  try {
    return RateFn::power(number(field(j, "c", where), where + ".c"),
                         number(field(j, "p", where), where + ".p"));
  } catch (const std::invalid_argument &e) {
    throw SchemaError(where + ": " + e.what());
  }
}

RateFn parse_rate(const json &j, const std::string &where) {
  if (j.is_number()) {
    try {
      return RateFn::constant(j.get<double>());
    } catch (const std::invalid_argument &e) {
      throw SchemaError(where + ": " + e.what());
    }
  }
  std::string kind = kind_of(j, where);
  if (kind == "power")
    return parse_power(j, where);
  if (kind == "table") {
    only_fields(j, {"kind", "values", "tail"}, where);
    const json &vals = field(j, "values", where);
    if (!vals.is_array())
      throw SchemaError(where + ".values: expected an array");
    std::vector<double> v;
    for (const auto &x : vals)
      v.push_back(number(x, where + ".values"));
    RateFn tail = parse_power(field(j, "tail", where), where + ".tail");
    try {
      return RateFn::table(std::move(v), tail.c(), tail.p());
    } catch (const std::invalid_argument &e) {
      throw SchemaError(where + ": " + e.what());
    }
  }
  throw SchemaError(where + ": unknown rate kind '" + kind + "'");
}

std::size_t index_value(const json &j, const std::string &where) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw SchemaError(where + ": expected a nonnegative integer index");
  return j.get<std::size_t>();
}

json rate_to_json(const RateFn &r) {
  json tail = {{"kind", "power"}, {"c", r.c()}, {"p", r.p()}};
  if (!r.is_table())
    return tail;
  return {{"kind", "table"}, {"values", r.values()}, {"tail", tail}};
}

} // namespace

ModelSpec parse_model(const std::string &json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw SchemaError(std::string("model: invalid JSON: ") + e.what());
  }
  only_fields(doc, {"name", "space", "A", "B", "conservative"}, "model");
  const json &name = field(doc, "name", "model");
  if (!name.is_string())
    throw SchemaError("model.name: expected a string");
  const json &space = field(doc, "space", "model");
  if (space != "l1")
    throw SchemaError("model.space: only \"l1\" is supported");
  const json &cons = field(doc, "conservative", "model");
  if (!cons.is_boolean())
    throw SchemaError("model.conservative: expected a boolean");
  bool conservative = cons.get<bool>();

  const json &B = field(doc, "B", "model");
  std::string bkind = kind_of(B, "model.B");
  try {
    if (bkind == "birth_death") {
      if (doc.contains("A"))
        throw SchemaError("model.A: must be omitted for birth_death, the diagonal is b + d + kill");
      only_fields(B, {"kind", "b", "d", "kill"}, "model.B");
      return ModelSpec::birth_death(name, parse_rate(field(B, "b", "model.B"), "model.B.b"),
                                    parse_rate(field(B, "d", "model.B"), "model.B.d"),
                                    parse_rate(field(B, "kill", "model.B"), "model.B.kill"),
                                    conservative);
    }
    RateFn a = parse_rate(field(doc, "A", "model"), "model.A");
    if (bkind == "pure_birth") {
      only_fields(B, {"kind"}, "model.B");
      ModelSpec m = ModelSpec::pure_birth(name, a);
      return ModelSpec(name, a, m.kernel(), conservative);
    }
    if (bkind == "zero") {
      only_fields(B, {"kind"}, "model.B");
      return ModelSpec::zero(name, a, conservative);
    }
    if (bkind == "table") {
      only_fields(B, {"kind", "columns", "tail"}, "model.B");
      const json &cols = field(B, "columns", "model.B");
      if (!cols.is_array())
        throw SchemaError("model.B.columns: expected an array");
      std::map<std::size_t, std::vector<Transition>> columns;
      for (const auto &col : cols) {
        if (!col.is_array() || col.size() != 2 || !col[1].is_array())
          throw SchemaError("model.B.columns: each column is [k, [[target, rate], ...]]");
        std::size_t k = index_value(col[0], "model.B.columns");
        if (columns.count(k))
          throw SchemaError("model.B.columns: duplicate column " + std::to_string(k));
        auto &dst = columns[k];
        for (const auto &tr : col[1]) {
          if (!tr.is_array() || tr.size() != 2)
            throw SchemaError("model.B.columns: transitions are [target, rate]");
          double r = number(tr[1], "model.B.columns rate");
          if (r < 0)
            throw SchemaError("model.B.columns: negative rate");
          dst.push_back({index_value(tr[0], "model.B.columns target"), r});
        }
      }
      TableTail tail = TableTail::None;
      if (B.contains("tail")) {
        const json &t = B["tail"];
        if (t.is_null() || t == "none")
          tail = TableTail::None;
        else if (t == "pure_birth")
          tail = TableTail::PureBirth;
        else
          throw SchemaError("model.B.tail: expected \"none\" or \"pure_birth\"");
      }
      return ModelSpec::table(name, a, std::move(columns), tail, conservative);
    }
  } catch (const std::invalid_argument &e) {
    throw SchemaError(std::string("model: ") + e.what());
  }
  throw SchemaError("model.B: unknown kind '" + bkind + "'");
}

ModelSpec load_model_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw SchemaError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string model_to_json(const ModelSpec &m) {
  json doc = {{"name", m.name()}, {"space", "l1"}, {"conservative", m.conservative()}};
  std::visit(
      [&](const auto &kern) {
        using K = std::decay_t<decltype(kern)>;
        if constexpr (std::is_same_v<K, ZeroKernel>) {
          doc["A"] = rate_to_json(m.diagonal());
          doc["B"] = {{"kind", "zero"}};
        } else if constexpr (std::is_same_v<K, PureBirthKernel>) {
          doc["A"] = rate_to_json(m.diagonal());
          doc["B"] = {{"kind", "pure_birth"}};
        } else if constexpr (std::is_same_v<K, BirthDeathKernel>) {
          doc["B"] = {{"kind", "birth_death"},
                      {"b", rate_to_json(kern.b)},
                      {"d", rate_to_json(kern.d)},
                      {"kill", rate_to_json(kern.kill)}};
        } else {
          doc["A"] = rate_to_json(m.diagonal());
          json cols = json::array();
          for (const auto &[k, col] : kern.columns) {
            json trs = json::array();
            for (const auto &tr : col)
              trs.push_back({tr.target, tr.rate});
            cols.push_back({k, trs});
          }
          doc["B"] = {{"kind", "table"},
                      {"columns", cols},
                      {"tail", kern.tail == TableTail::PureBirth ? "pure_birth" : "none"}};
        }
      },
      m.kernel());
  return doc.dump(2);
}

ModelSpec zoo_model(const std::string &name) {
  if (name == "two_state")
    return ModelSpec::table(name, RateFn::table({1.0, 2.0}, 1.0, 0.0),
                            {{0, {{1, 1.0}}}}, TableTail::None, false);
  if (name == "yule")
    return ModelSpec::pure_birth(name, RateFn::power(1.0, 1.0));
  if (name == "quadratic_birth")
    return ModelSpec::pure_birth(name, RateFn::power(1.0, 2.0));
  if (name == "killed_birth_death")
    return ModelSpec::birth_death(name, RateFn::constant(1.0), RateFn::constant(1.0),
                                  RateFn::constant(1.0), false);
  if (name == "birth_death")
    return ModelSpec::birth_death(name, RateFn::constant(1.0), RateFn::constant(1.0),
                                  RateFn::constant(0.0), true);
  if (name == "decay")
    return ModelSpec::zero(name, RateFn::constant(1.0), false);
  throw std::invalid_argument("unknown zoo model '" + name + "'");
}

std::vector<std::string> zoo_names() {
  return {"two_state", "yule", "quadratic_birth", "killed_birth_death", "birth_death",
          "decay"};
}

} // namespace honesty
