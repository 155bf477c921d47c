// Copyright 2026 The Thermo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "thermo/block.hpp"

namespace thermo::app {
namespace {

using nlohmann::json;

std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string child(const std::string& path, std::size_t index) {
  return path + "[" + std::to_string(index) + "]";
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ValidationError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(path, "expected a finite number");
  return x;
}

Symbol symbol(const Sft& sft, const json& v, const std::string& path) {
  if (v.is_number_integer()) {
    const int s = v.get<int>();
    if (s < 0 || s >= sft.alphabet_size()) throw ValidationError(path, "symbol out of range");
    return s;
  }
  if (v.is_string()) {
    const Word w = sft.parse_word(v.get<std::string>());
    if (w.size() != 1) throw ValidationError(path, "expected a single symbol");
    return w.front();
  }
  throw ValidationError(path, "expected a symbol (label string or index)");
}

Word word(const Sft& sft, const std::string& text, const std::string& path) {
  try {
    return sft.parse_word(text);
  } catch (const InputError& e) {
    throw ValidationError(path, e.what());
  }
}

Sft parse_sft(const json& spec, const std::string& path) {
  int m = 0;
  std::string labels;
  if (spec.contains("alphabet")) {
    const json& a = spec["alphabet"];
    if (a.is_number_integer()) {
      m = a.get<int>();
    } else if (a.is_string()) {
      labels = a.get<std::string>();
      m = static_cast<int>(labels.size());
    } else {
      throw ValidationError(child(path, "alphabet"), "expected a size or a string of labels");
    }
    if (m < 1) throw ValidationError(child(path, "alphabet"), "alphabet must be non-empty");
  }
  Eigen::MatrixXi t;
  if (spec.contains("transitions")) {
    const json& rows = spec["transitions"];
    const std::string tp = child(path, "transitions");
    if (!rows.is_array() || rows.empty()) throw ValidationError(tp, "expected a list of rows");
    const auto n = static_cast<int>(rows.size());
    if (m == 0) m = n;
    if (n != m) throw ValidationError(tp, "expected " + std::to_string(m) + " rows");
    t.resize(m, m);
    for (int i = 0; i < m; ++i) {
      const json& row = rows[i];
      if (!row.is_array() || static_cast<int>(row.size()) != m) {
        throw ValidationError(child(tp, i), "expected " + std::to_string(m) + " entries");
      }
      for (int j = 0; j < m; ++j) {
        if (!row[j].is_number_integer()) throw ValidationError(child(child(tp, i), j), "expected 0 or 1");
        t(i, j) = row[j].get<int>();
      }
    }
  } else {
    if (m == 0) throw ValidationError(path, "needs an alphabet or a transition matrix");
    t = Eigen::MatrixXi::Ones(m, m);
  }
  try {
    return Sft(t, labels);
  } catch (const InputError& e) {
    throw ValidationError(child(path, "transitions"), e.what());
  }
}

Potential parse_table(const Sft& sft, const json& spec, const std::string& path) {
  const json& dj = require(spec, "depth", path);
  if (!dj.is_number_integer() || dj.get<int>() < 1) {
    throw ValidationError(child(path, "depth"), "expected a positive integer");
  }
  const int k = dj.get<int>();
  const int m = sft.alphabet_size();
  const bool has_default = spec.contains("default");
  const double fallback = has_default ? number(spec["default"], child(path, "default")) : 0.0;
  const auto size = word_space_size(m, k);
  if (size > 1'000'000) throw ValidationError(child(path, "depth"), "table too large");
  Eigen::VectorXd values = Eigen::VectorXd::Constant(size, fallback);
  std::set<WordCode> seen;
  const json& table = require(spec, "values", path);
  if (!table.is_object()) throw ValidationError(child(path, "values"), "expected {word: value}");
  for (const auto& [key, v] : table.items()) {
    const std::string vp = child(child(path, "values"), key);
    const Word w = word(sft, key, vp);
    if (static_cast<int>(w.size()) != k) {
      throw ValidationError(vp, "word length differs from depth " + std::to_string(k));
    }
    values[encode_word(w, m)] = number(v, vp);
    seen.insert(encode_word(w, m));
  }
  if (!has_default) {
    for (const Word& w : enumerate_words(sft, k)) {
      if (!seen.count(encode_word(w, m))) {
        throw ValidationError(child(path, "values"),
                              "missing admissible word '" + sft.format_word(w) +
                                  "' and no default given");
      }
    }
  }
  return Potential(m, k, std::move(values));
}

std::map<std::string, Potential> parse_potentials(const Sft& sft, const json& specs,
                                                  const std::string& path) {
  if (!specs.is_object()) throw ValidationError(path, "expected {name: potential}");
  std::map<std::string, Potential> done;
  std::set<std::string> active;
  const int m = sft.alphabet_size();
  std::function<Potential(const std::string&, const std::string&)> resolve =
      [&](const std::string& name, const std::string& where) -> Potential {
    if (auto it = done.find(name); it != done.end()) return it->second;
    if (!specs.contains(name)) throw ValidationError(where, "unknown potential '" + name + "'");
    if (!active.insert(name).second) {
      throw ValidationError(where, "potential '" + name + "' refers to itself");
    }
    const json& spec = specs[name];
    const std::string p = child(path, name);
    if (!spec.is_object()) throw ValidationError(p, "expected an object");
    Potential out = Potential::Zero(m);
    if (spec.contains("constant")) {
      out = Potential::Constant(m, number(spec["constant"], child(p, "constant")));
    } else if (spec.contains("indicator")) {
      const json& syms = spec["indicator"];
      const std::string ip = child(p, "indicator");
      if (!syms.is_array()) throw ValidationError(ip, "expected a list of symbols");
      std::vector<Symbol> list;
      for (std::size_t i = 0; i < syms.size(); ++i) list.push_back(symbol(sft, syms[i], child(ip, i)));
      out = Potential::SymbolIndicator(m, list);
    } else if (spec.contains("word")) {
      const json& w = spec["word"];
      if (!w.is_string()) throw ValidationError(child(p, "word"), "expected a word");
      out = Potential::WordIndicator(m, word(sft, w.get<std::string>(), child(p, "word")));
    } else if (spec.contains("combination")) {
      const json& terms = spec["combination"];
      const std::string cp = child(p, "combination");
      if (!terms.is_array() || terms.empty()) throw ValidationError(cp, "expected a non-empty list");
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tp = child(cp, i);
        const json& ref = require(terms[i], "potential", tp);
        if (!ref.is_string()) throw ValidationError(child(tp, "potential"), "expected a name");
        const double w = terms[i].contains("weight") ? number(terms[i]["weight"], child(tp, "weight")) : 1.0;
        out = out + w * resolve(ref.get<std::string>(), child(tp, "potential"));
      }
    } else if (spec.contains("values")) {
      out = parse_table(sft, spec, p);
    } else {
      throw ValidationError(p, "expected one of constant, indicator, word, values, combination");
    }
    active.erase(name);
    done.emplace(name, out);
    return out;
  };
  for (const auto& [name, spec] : specs.items()) resolve(name, child(path, name));
  return done;
}

MarkovMeasure parse_measure(const Sft& sft, const json& spec, const std::string& path) {
  if (!spec.is_object()) throw ValidationError(path, "expected an object");
  const json& dj = require(spec, "depth", path);
  if (!dj.is_number_integer() || dj.get<int>() < 1) {
    throw ValidationError(child(path, "depth"), "expected a positive integer");
  }
  const int d = dj.get<int>();
  std::vector<Word> states;
  if (spec.contains("states")) {
    const json& s = spec["states"];
    if (!s.is_array()) throw ValidationError(child(path, "states"), "expected a list of words");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s[i].is_string()) throw ValidationError(child(child(path, "states"), i), "expected a word");
      states.push_back(word(sft, s[i].get<std::string>(), child(child(path, "states"), i)));
    }
  } else {
    states = enumerate_words(sft, d, kDefaultBlockStateCap);
  }
  const auto n = static_cast<Eigen::Index>(states.size());
  const std::string tp = child(path, "transition");
  const json& rows = require(spec, "transition", path);
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
    throw ValidationError(tp, "expected " + std::to_string(n) + " rows");
  }
  Eigen::MatrixXd p(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!rows[i].is_array() || static_cast<Eigen::Index>(rows[i].size()) != n) {
      throw ValidationError(child(tp, i), "expected " + std::to_string(n) + " entries");
    }
    for (Eigen::Index j = 0; j < n; ++j) p(i, j) = number(rows[i][j], child(child(tp, i), j));
  }
  try {
    Eigen::VectorXd pi;
    if (spec.contains("stationary")) {
      const json& s = spec["stationary"];
      const std::string sp = child(path, "stationary");
      if (!s.is_array() || static_cast<Eigen::Index>(s.size()) != n) {
        throw ValidationError(sp, "expected " + std::to_string(n) + " entries");
      }
      pi.resize(n);
      for (Eigen::Index i = 0; i < n; ++i) pi[i] = number(s[i], child(sp, i));
    } else {
      pi = stationary_distribution(p);
    }
    MarkovMeasure mu(sft.alphabet_size(), d, std::move(states), std::move(p), std::move(pi));
    check_support(sft, mu);
    return mu;
  } catch (const ValidationError&) {
    throw;
  } catch (const InputError& e) {
    throw ValidationError(path, e.what());
  }
}

System parse_system(const std::string& name, const json& spec, const std::string& path) {
  if (!spec.is_object()) throw ValidationError(path, "expected an object");
  System sys{name, parse_sft(spec, path), {}, {}};
  if (spec.contains("potentials")) {
    sys.potentials = parse_potentials(sys.sft, spec["potentials"], child(path, "potentials"));
  }
  if (spec.contains("measures")) {
    const json& ms = spec["measures"];
    if (!ms.is_object()) throw ValidationError(child(path, "measures"), "expected {name: measure}");
    for (const auto& [key, m] : ms.items()) {
      sys.measures.emplace(key, parse_measure(sys.sft, m, child(child(path, "measures"), key)));
    }
  }
  return sys;
}

}  // namespace

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ValidationError(path, "expected an object");
  if (!obj.contains(key)) throw ValidationError(child(path, key), "missing required field");
  return obj[key];
}

const Potential& System::potential(const std::string& key, const std::string& where) const {
  const auto it = potentials.find(key);
  if (it == potentials.end()) {
    throw ValidationError(where, "unknown potential '" + key + "' in system '" + name + "'");
  }
  return it->second;
}

const MarkovMeasure& System::measure(const std::string& key, const std::string& where) const {
  const auto it = measures.find(key);
  if (it == measures.end()) {
    throw ValidationError(where, "unknown measure '" + key + "' in system '" + name + "'");
  }
  return it->second;
}

const System& Scenario::system(const std::string& key, const std::string& where) const {
  const auto it = systems.find(key);
  if (it == systems.end()) throw ValidationError(where, "unknown system '" + key + "'");
  return it->second;
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n');
    const auto last_newline = text.rfind('\n', byte == 0 ? 0 : byte - 1);
    const std::size_t column =
        last_newline == std::string::npos || byte == 0 ? byte + 1 : byte - last_newline;
    throw ValidationError(origin + ":" + std::to_string(line) + ":" + std::to_string(column),
                          "JSON syntax error");
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ValidationError("--set " + assignment, "expected key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string token = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (token.empty()) throw ValidationError("--set " + key, "empty path component");
    if (node->is_array()) {
      const bool digits = std::all_of(token.begin(), token.end(), ::isdigit);
      if (!digits || std::stoul(token) >= node->size()) {
        throw ValidationError("--set " + key, "index '" + token + "' out of range");
      }
      node = &(*node)[std::stoul(token)];
    } else {
      if (!node->is_object() && !node->is_null()) {
        throw ValidationError("--set " + key, "'" + token + "' descends into a scalar");
      }
      node = &(*node)[token];
    }
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

Scenario build_scenario(const json& doc) {
  if (!doc.is_object()) throw ValidationError("(root)", "expected an object");
  Scenario sc;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ValidationError("seed", "expected a nonnegative integer");
    sc.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("systems")) {
    const json& systems = doc["systems"];
    if (!systems.is_object() || systems.empty()) {
      throw ValidationError("systems", "expected a non-empty {name: system} object");
    }
    for (const auto& [name, spec] : systems.items()) {
      sc.systems.emplace(name, parse_system(name, spec, child("systems", name)));
    }
  } else if (doc.contains("alphabet") || doc.contains("transitions")) {
    sc.systems.emplace("main", parse_system("main", doc, ""));
  } else {
    throw ValidationError("systems", "missing: give 'systems' or a top-level alphabet");
  }
  const json& tasks = require(doc, "tasks", "");
  if (!tasks.is_array() || tasks.empty()) throw ValidationError("tasks", "expected a non-empty list");
  std::set<std::string> names;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string tp = child("tasks", i);
    json task = tasks[i];
    const json& type = require(task, "type", tp);
    if (!type.is_string()) throw ValidationError(child(tp, "type"), "expected a string");
    if (!task.contains("name")) {
      task["name"] = std::to_string(i) + "_" + type.get<std::string>();
    }
    if (!task["name"].is_string()) throw ValidationError(child(tp, "name"), "expected a string");
    const std::string name = task["name"].get<std::string>();
    if (name.empty() || name.find_first_of("/\\") != std::string::npos || name[0] == '.') {
      throw ValidationError(child(tp, "name"), "task names must be plain file names");
    }
    if (!names.insert(name).second) throw ValidationError(child(tp, "name"), "duplicate task name");
    sc.tasks.push_back(std::move(task));
  }
  return sc;
}

}  // namespace thermo::app
