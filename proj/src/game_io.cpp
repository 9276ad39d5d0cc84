#include "persuasion/game_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace persuasion {

namespace {

// Minimal document tree that keeps numeric literals as text so that
// decimals convert exactly (a double round-trip would corrupt 0.55).
struct JNode {
  enum class Type { Null, Bool, Number, String, Object, Array };
  Type type = Type::Null;
  bool boolean = false;
  std::string text;  // raw number literal or string payload
  std::vector<std::pair<std::string, JNode>> members;
  std::vector<JNode> items;

  const JNode* find(const std::string& key) const {
    for (const auto& [k, v] : members) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

const char* type_name(JNode::Type t) {
  switch (t) {
    case JNode::Type::Null: return "null";
    case JNode::Type::Bool: return "bool";
    case JNode::Type::Number: return "number";
    case JNode::Type::String: return "string";
    case JNode::Type::Object: return "object";
    case JNode::Type::Array: return "array";
  }
  return "?";
}

class SaxBuilder {
 public:
  using json = nlohmann::json;

  bool null() { return scalar(JNode{}); }
  bool boolean(bool b) {
    JNode n;
    n.type = JNode::Type::Bool;
    n.boolean = b;
    return scalar(std::move(n));
  }
  bool number_integer(json::number_integer_t v) { return number_text(std::to_string(v)); }
  bool number_unsigned(json::number_unsigned_t v) { return number_text(std::to_string(v)); }
  bool number_float(json::number_float_t, const std::string& raw) { return number_text(raw); }
  bool string(std::string& s) {
    JNode n;
    n.type = JNode::Type::String;
    n.text = s;
    return scalar(std::move(n));
  }
  bool binary(json::binary_t&) { return fail("binary values not allowed"); }
  bool start_object(std::size_t) {
    JNode n;
    n.type = JNode::Type::Object;
    stack_.push_back(std::move(n));
    return true;
  }
  bool key(std::string& k) {
    keys_.push_back(k);
    return true;
  }
  bool end_object() { return close(); }
  bool start_array(std::size_t) {
    JNode n;
    n.type = JNode::Type::Array;
    stack_.push_back(std::move(n));
    return true;
  }
  bool end_array() { return close(); }
  bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) {
    error_ = "at byte " + std::to_string(position) + ": " + ex.what();
    return false;
  }

  const std::string& error() const { return error_; }
  JNode take_root() { return std::move(root_); }

 private:
  bool number_text(std::string raw) {
    JNode n;
    n.type = JNode::Type::Number;
    n.text = std::move(raw);
    return scalar(std::move(n));
  }
  bool fail(const std::string& message) {
    error_ = message;
    return false;
  }
  bool scalar(JNode n) {
    if (stack_.empty()) {
      root_ = std::move(n);
      return true;
    }
    return attach(std::move(n));
  }
  bool attach(JNode n) {
    JNode& top = stack_.back();
    if (top.type == JNode::Type::Array) {
      top.items.push_back(std::move(n));
    } else {
      if (keys_.empty()) return fail("value without a key");
      top.members.emplace_back(std::move(keys_.back()), std::move(n));
      keys_.pop_back();
    }
    return true;
  }
  bool close() {
    JNode done = std::move(stack_.back());
    stack_.pop_back();
    if (stack_.empty()) {
      root_ = std::move(done);
      return true;
    }
    return attach(std::move(done));
  }

  JNode root_;
  std::vector<JNode> stack_;
  std::vector<std::string> keys_;
  std::string error_;
};

JNode parse_tree(const std::string& text) {
  SaxBuilder builder;
  if (!nlohmann::json::sax_parse(text, &builder)) {
    throw ParseError("invalid JSON " + (builder.error().empty() ? "input" : builder.error()));
  }
  return builder.take_root();
}

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

const JNode& expect(const JNode& n, JNode::Type t, const std::string& path) {
  if (n.type != t) bad(path, std::string("expected ") + type_name(t) + ", got " + type_name(n.type));
  return n;
}

Rational to_rational(const JNode& n, const std::string& path) {
  if (n.type != JNode::Type::Number && n.type != JNode::Type::String) {
    bad(path, "expected a number or a rational string");
  }
  try {
    return Rational::parse(n.text);
  } catch (const std::invalid_argument& e) {
    bad(path, e.what());
  }
}

std::vector<std::string> to_strings(const JNode& n, const std::string& path) {
  expect(n, JNode::Type::Array, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n.items.size(); ++i) {
    out.push_back(expect(n.items[i], JNode::Type::String, path + "[" + std::to_string(i) + "]").text);
  }
  return out;
}

std::vector<Rational> to_rationals(const JNode& n, const std::string& path) {
  expect(n, JNode::Type::Array, path);
  std::vector<Rational> out;
  for (std::size_t i = 0; i < n.items.size(); ++i) {
    out.push_back(to_rational(n.items[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Matrix to_matrix(const JNode& n, const std::string& path) {
  expect(n, JNode::Type::Array, path);
  Matrix out;
  for (std::size_t i = 0; i < n.items.size(); ++i) {
    out.push_back(to_rationals(n.items[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Kernel to_kernel(const JNode& n, const std::string& path) {
  expect(n, JNode::Type::Object, path);
  Kernel k;
  for (const auto& [key, value] : n.members) {
    if (key == "signals") k.signals = to_strings(value, path + ".signals");
    else if (key == "probs") k.probs = to_matrix(value, path + ".probs");
    else bad(path, "unknown field '" + key + "'");
  }
  try {
    k.validate();
  } catch (const std::invalid_argument& e) {
    bad(path, e.what());
  }
  return k;
}

}  // namespace

GameFile parse_game_text(const std::string& text) {
  JNode root = parse_tree(text);
  expect(root, JNode::Type::Object, "game file");
  const JNode *states = nullptr, *actions = nullptr, *prior = nullptr, *u = nullptr, *v = nullptr,
              *expert2 = nullptr, *experiment = nullptr;
  for (const auto& [key, value] : root.members) {
    if (key == "states") states = &value;
    else if (key == "actions") actions = &value;
    else if (key == "prior") prior = &value;
    else if (key == "expert_payoff") u = &value;
    else if (key == "dm_payoff") v = &value;
    else if (key == "expert2") expert2 = &value;
    else if (key == "experiment") experiment = &value;
    else bad("game file", "unknown field '" + key + "'");
  }
  for (auto [node, name] : {std::pair<const JNode*, const char*>{states, "states"},
                            {actions, "actions"},
                            {prior, "prior"},
                            {u, "expert_payoff"},
                            {v, "dm_payoff"}}) {
    if (!node) bad("game file", std::string("missing field '") + name + "'");
  }

  std::optional<Expert2> e2;
  if (expert2) {
    expect(*expert2, JNode::Type::Object, "expert2");
    const JNode* beta = expert2->find("beta");
    const JNode* payoff = expert2->find("payoff");
    if ((beta == nullptr) == (payoff == nullptr)) {
      bad("expert2", "exactly one of 'beta' or 'payoff' is required");
    }
    Expert2 val;
    if (beta) {
      val.kind = Expert2::Kind::Beta;
      val.beta = to_rational(*beta, "expert2.beta");
    } else {
      val.kind = Expert2::Kind::Payoff;
      val.payoff = to_matrix(*payoff, "expert2.payoff");
    }
    e2 = std::move(val);
  }

  GameFile out{[&] {
                 try {
                   return GameSpec::create(to_strings(*states, "states"), to_strings(*actions, "actions"),
                                           Belief(to_rationals(*prior, "prior")),
                                           to_matrix(*u, "expert_payoff"), to_matrix(*v, "dm_payoff"),
                                           std::move(e2));
                 } catch (const std::invalid_argument& e) {
                   throw ParseError(std::string("game file: ") + e.what());
                 }
               }(),
               std::nullopt};
  if (experiment) {
    Kernel k = to_kernel(*experiment, "experiment");
    if (k.num_states() != out.game.num_states()) bad("experiment", "row count != number of states");
    out.experiment = std::move(k);
  }
  return out;
}

GameFile load_game_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_game_text(buf.str());
}

namespace {

nlohmann::json rationals_to_json(const std::vector<Rational>& xs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& x : xs) arr.push_back(x.str());
  return arr;
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : m) arr.push_back(rationals_to_json(row));
  return arr;
}

nlohmann::json partition_to_json(const IntervalPartition& p) {
  nlohmann::json j;
  j["signals"] = p.signals;
  j["coordinate"] = p.coordinate;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : p.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& iv : row) r.push_back({iv.lo.str(), iv.hi.str(), iv.signal});
    rows.push_back(std::move(r));
  }
  j["intervals"] = std::move(rows);
  return j;
}

IntervalPartition partition_from_tree(const JNode& n, const std::string& path) {
  expect(n, JNode::Type::Object, path);
  IntervalPartition p;
  const JNode* intervals = nullptr;
  for (const auto& [key, value] : n.members) {
    if (key == "signals") p.signals = to_strings(value, path + ".signals");
    else if (key == "coordinate") p.coordinate = static_cast<int>(to_rational(value, path + ".coordinate").to_double());
    else if (key == "intervals") intervals = &value;
    else bad(path, "unknown field '" + key + "'");
  }
  if (!intervals) bad(path, "missing field 'intervals'");
  expect(*intervals, JNode::Type::Array, path + ".intervals");
  for (std::size_t s = 0; s < intervals->items.size(); ++s) {
    const std::string rp = path + ".intervals[" + std::to_string(s) + "]";
    expect(intervals->items[s], JNode::Type::Array, rp);
    std::vector<LabeledInterval> row;
    for (std::size_t i = 0; i < intervals->items[s].items.size(); ++i) {
      const JNode& cell = intervals->items[s].items[i];
      expect(cell, JNode::Type::Array, rp);
      if (cell.items.size() != 3) bad(rp, "interval must be [lo, hi, signal]");
      row.push_back({to_rational(cell.items[0], rp), to_rational(cell.items[1], rp),
                     expect(cell.items[2], JNode::Type::String, rp).text});
    }
    p.rows.push_back(std::move(row));
  }
  p.validate();
  return p;
}

nlohmann::json response_to_json(const DmResponse& r) {
  nlohmann::json j;
  j["belief"] = rationals_to_json(r.belief.weights());
  j["action"] = rationals_to_json(r.action.weights());
  return j;
}

DmResponse response_from_tree(const JNode& n, const std::string& path) {
  expect(n, JNode::Type::Object, path);
  const JNode* belief = n.find("belief");
  const JNode* action = n.find("action");
  if (!belief || !action) bad(path, "response needs 'belief' and 'action'");
  return {Belief(to_rationals(*belief, path + ".belief")),
          MixedAction(to_rationals(*action, path + ".action"))};
}

}  // namespace

std::string game_to_json(const GameSpec& g, const Kernel* experiment) {
  nlohmann::json j;
  j["states"] = g.states;
  j["actions"] = g.actions;
  j["prior"] = rationals_to_json(g.prior.weights());
  j["expert_payoff"] = matrix_to_json(g.expert_payoff);
  j["dm_payoff"] = matrix_to_json(g.dm_payoff);
  if (g.expert2) {
    if (g.expert2->kind == Expert2::Kind::Beta) {
      j["expert2"] = {{"beta", g.expert2->beta.str()}};
    } else {
      j["expert2"] = {{"payoff", matrix_to_json(g.expert2->payoff)}};
    }
  }
  if (experiment) {
    j["experiment"] = {{"signals", experiment->signals}, {"probs", matrix_to_json(experiment->probs)}};
  }
  return j.dump(2);
}

std::string profile_to_json(const StrategyProfile& p) {
  nlohmann::json j;
  j["experiment1"] = partition_to_json(p.experiment1);
  j["experiment2"] = partition_to_json(p.experiment2);
  j["messages1"] = p.messages1;
  j["messages2"] = p.messages2;
  j["report1"] = matrix_to_json(p.report1);
  j["report2"] = matrix_to_json(p.report2);
  nlohmann::json resp = nlohmann::json::array();
  for (const auto& row : p.response) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& cell : row) r.push_back(response_to_json(cell));
    resp.push_back(std::move(r));
  }
  j["response"] = std::move(resp);
  if (p.offpath) j["offpath"] = response_to_json(*p.offpath);
  return j.dump(2);
}

StrategyProfile profile_from_json(const GameSpec& g, const std::string& text) {
  JNode root = parse_tree(text);
  expect(root, JNode::Type::Object, "profile");
  const JNode *e1 = nullptr, *e2 = nullptr, *m1 = nullptr, *m2 = nullptr, *r1 = nullptr,
              *r2 = nullptr, *resp = nullptr, *off = nullptr;
  for (const auto& [key, value] : root.members) {
    if (key == "experiment1") e1 = &value;
    else if (key == "experiment2") e2 = &value;
    else if (key == "messages1") m1 = &value;
    else if (key == "messages2") m2 = &value;
    else if (key == "report1") r1 = &value;
    else if (key == "report2") r2 = &value;
    else if (key == "response") resp = &value;
    else if (key == "offpath") off = &value;
    else bad("profile", "unknown field '" + key + "'");
  }
  if (!e1 || !e2 || !m1 || !m2 || !r1 || !r2 || !resp) bad("profile", "missing field");
  StrategyProfile p{partition_from_tree(*e1, "experiment1"),
                    partition_from_tree(*e2, "experiment2"),
                    to_strings(*m1, "messages1"),
                    to_strings(*m2, "messages2"),
                    to_matrix(*r1, "report1"),
                    to_matrix(*r2, "report2"),
                    {},
                    std::nullopt};
  expect(*resp, JNode::Type::Array, "response");
  for (std::size_t a = 0; a < resp->items.size(); ++a) {
    const std::string rp = "response[" + std::to_string(a) + "]";
    expect(resp->items[a], JNode::Type::Array, rp);
    std::vector<DmResponse> row;
    for (std::size_t b = 0; b < resp->items[a].items.size(); ++b) {
      row.push_back(response_from_tree(resp->items[a].items[b], rp + "[" + std::to_string(b) + "]"));
    }
    p.response.push_back(std::move(row));
  }
  if (off) p.offpath = response_from_tree(*off, "offpath");
  try {
    p.validate(g);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("profile: ") + e.what());
  }
  return p;
}

}  // namespace persuasion
