#include "atlplus/cgm.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

namespace atlplus {

std::string to_string(const GlobalMove& move) {
  std::string out = "<";
  for (std::size_t i = 0; i < move.actions.size(); ++i) {
    if (i) out += ',';
    out += move.actions[i];
  }
  return out + ">";
}

std::string to_string(const CoalitionMove& move) { return to_string(GlobalMove{move.actions}); }

ModelProvider::ModelProvider(const ModelProvider& other) {
  std::lock_guard lock(other.mutex_);
  materialized_ = other.materialized_;
}

ModelProvider& ModelProvider::operator=(const ModelProvider& other) {
  if (this == &other) return *this;
  std::unordered_set<StateKey> copy;
  {
    std::lock_guard lock(other.mutex_);
    copy = other.materialized_;
  }
  std::lock_guard lock(mutex_);
  materialized_ = std::move(copy);
  return *this;
}

void ModelProvider::touch(const StateKey& s) const {
  std::lock_guard lock(mutex_);
  materialized_.insert(s);
}

void ModelProvider::check_agent(AgentId agent) const {
  if (agent < 1 || agent > agent_count()) throw ModelError("unknown agent " + std::to_string(agent));
}

std::vector<Action> ModelProvider::available_actions(AgentId agent, const StateKey& s) const {
  check_agent(agent);
  if (!has_state(s)) throw ModelError("unknown state '" + s + "'");
  touch(s);
  auto actions = do_available_actions(agent, s);
  if (actions.empty()) {
    throw ModelError("agent " + std::to_string(agent) + " has no action at state '" + s + "'");
  }
  return actions;
}

StateKey ModelProvider::out(const StateKey& s, const GlobalMove& move) const {
  if (!has_state(s)) throw ModelError("unknown state '" + s + "'");
  if (static_cast<int>(move.actions.size()) != agent_count()) {
    throw ModelError("global move " + to_string(move) + " has wrong length");
  }
  touch(s);
  StateKey target = do_out(s, move);
  touch(target);
  return target;
}

std::vector<std::string> ModelProvider::labeling(const StateKey& s) const {
  if (!has_state(s)) throw ModelError("unknown state '" + s + "'");
  touch(s);
  return do_labeling(s);
}

bool ModelProvider::holds(const StateKey& s, const std::string& prop) const {
  const auto labels = labeling(s);
  return std::find(labels.begin(), labels.end(), prop) != labels.end();
}

std::size_t ModelProvider::materialized_count() const {
  std::lock_guard lock(mutex_);
  return materialized_.size();
}

void ModelProvider::reset_materialized() {
  std::lock_guard lock(mutex_);
  materialized_.clear();
}

// ---------------------------------------------------------------------------

ExplicitCGM::ExplicitCGM(int agents) : agents_(agents) {
  if (agents < 1) throw ModelError("a model needs at least one agent");
}

std::size_t ExplicitCGM::add_state(const StateKey& name, std::vector<std::string> labels) {
  if (name.empty() || name == kPlaceholder) throw ModelError("invalid state name '" + name + "'");
  if (index_.count(name)) throw ModelError("duplicate state '" + name + "'");
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  StateData d;
  d.name = name;
  d.labels = std::move(labels);
  d.actions.assign(agents_, std::vector<Action>{"0"});
  d.transitions.assign(1, -1);
  index_.emplace(name, states_.size());
  states_.push_back(std::move(d));
  return states_.size() - 1;
}

ExplicitCGM::StateData& ExplicitCGM::data(const StateKey& s) {
  auto it = index_.find(s);
  if (it == index_.end()) throw ModelError("unknown state '" + s + "'");
  return states_[it->second];
}

const ExplicitCGM::StateData& ExplicitCGM::data(const StateKey& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) throw ModelError("unknown state '" + s + "'");
  return states_[it->second];
}

void ExplicitCGM::set_actions(const StateKey& s, AgentId agent, std::vector<Action> actions) {
  if (agent < 1 || agent > agents_) throw ModelError("unknown agent " + std::to_string(agent));
  if (actions.empty()) {
    throw ModelError("empty action set for agent " + std::to_string(agent) + " at state '" + s + "'");
  }
  for (const auto& a : actions) {
    if (a.empty() || a == kPlaceholder || a.find(',') != std::string::npos) {
      throw ModelError("invalid action name '" + a + "'");
    }
  }
  auto sorted = actions;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ModelError("duplicate action at state '" + s + "'");
  }
  StateData& d = data(s);
  d.actions[agent - 1] = std::move(actions);
  std::size_t moves = 1;
  for (const auto& acts : d.actions) moves *= acts.size();
  d.transitions.assign(moves, -1);
}

std::size_t ExplicitCGM::move_index(const StateData& d, std::span<const std::size_t> action_indices) const {
  std::size_t index = 0;
  for (int a = 0; a < agents_; ++a) index = index * d.actions[a].size() + action_indices[a];
  return index;
}

std::size_t ExplicitCGM::move_index(const StateData& d, const GlobalMove& move) const {
  if (static_cast<int>(move.actions.size()) != agents_) {
    throw ModelError("move " + to_string(move) + " has wrong length at state '" + d.name + "'");
  }
  std::size_t index = 0;
  for (int a = 0; a < agents_; ++a) {
    const auto& acts = d.actions[a];
    auto it = std::find(acts.begin(), acts.end(), move.actions[a]);
    if (it == acts.end()) {
      throw ModelError("action '" + move.actions[a] + "' of agent " + std::to_string(a + 1) +
                       " not available at state '" + d.name + "'");
    }
    index = index * acts.size() + static_cast<std::size_t>(it - acts.begin());
  }
  return index;
}

GlobalMove ExplicitCGM::move_at(const StateData& d, std::size_t index) const {
  GlobalMove move;
  move.actions.resize(agents_);
  for (int a = agents_ - 1; a >= 0; --a) {
    const auto n = d.actions[a].size();
    move.actions[a] = d.actions[a][index % n];
    index /= n;
  }
  return move;
}

void ExplicitCGM::set_transition(const StateKey& s, const GlobalMove& move, const StateKey& target) {
  const std::size_t target_index = state_index(target);
  StateData& d = data(s);
  const std::size_t index = move_index(d, move);
  if (d.transitions[index] >= 0) {
    throw ModelError("duplicate transition for state '" + s + "', move " + to_string(move));
  }
  d.transitions[index] = static_cast<long>(target_index);
}

void ExplicitCGM::validate() const {
  if (states_.empty()) throw ModelError("model has no states");
  for (const auto& d : states_) {
    for (std::size_t i = 0; i < d.transitions.size(); ++i) {
      if (d.transitions[i] < 0) {
        throw ModelError("missing transition for state '" + d.name + "', move " + to_string(move_at(d, i)));
      }
    }
  }
}

std::size_t ExplicitCGM::state_index(const StateKey& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) throw ModelError("unknown state '" + s + "'");
  return it->second;
}

const std::vector<Action>& ExplicitCGM::actions_at(std::size_t state, AgentId agent) const {
  return states_.at(state).actions.at(agent - 1);
}

std::size_t ExplicitCGM::successor(std::size_t state, std::span<const std::size_t> action_indices) const {
  const StateData& d = states_.at(state);
  const long target = d.transitions[move_index(d, action_indices)];
  if (target < 0) throw ModelError("missing transition for state '" + d.name + "'");
  return static_cast<std::size_t>(target);
}

bool ExplicitCGM::label(std::size_t state, const std::string& prop) const {
  const auto& labels = states_.at(state).labels;
  return std::binary_search(labels.begin(), labels.end(), prop);
}

std::vector<Action> ExplicitCGM::do_available_actions(AgentId agent, const StateKey& s) const {
  return data(s).actions.at(agent - 1);
}

StateKey ExplicitCGM::do_out(const StateKey& s, const GlobalMove& move) const {
  const StateData& d = data(s);
  const long target = d.transitions[move_index(d, move)];
  if (target < 0) throw ModelError("missing transition for state '" + s + "', move " + to_string(move));
  return states_[target].name;
}

std::vector<std::string> ExplicitCGM::do_labeling(const StateKey& s) const { return data(s).labels; }

std::string ExplicitCGM::to_text() const {
  std::ostringstream out;
  out << "agents: " << agents_ << '\n';
  for (const auto& d : states_) {
    out << "state " << d.name;
    for (const auto& l : d.labels) out << ' ' << l;
    out << '\n';
  }
  for (const auto& d : states_) {
    for (int a = 0; a < agents_; ++a) {
      out << "actions " << d.name << ' ' << (a + 1) << ':';
      for (const auto& act : d.actions[a]) out << ' ' << act;
      out << '\n';
    }
  }
  for (const auto& d : states_) {
    for (std::size_t i = 0; i < d.transitions.size(); ++i) {
      const GlobalMove move = move_at(d, i);
      out << "trans " << d.name << ' ';
      for (int a = 0; a < agents_; ++a) out << (a ? "," : "") << move.actions[a];
      out << " -> " << (d.transitions[i] < 0 ? std::string("?") : states_[d.transitions[i]].name) << '\n';
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_ws(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string word; in >> word;) out.push_back(word);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Line {
  std::size_t number;
  std::string text;
};

[[noreturn]] void line_error(const Line& line, const std::string& msg) {
  throw ModelError("line " + std::to_string(line.number) + ": " + msg);
}

int parse_int(const Line& line, const std::string& text) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    line_error(line, "expected a number, found '" + text + "'");
  }
}

}  // namespace

ExplicitCGM load_explicit(std::string_view text) {
  std::vector<Line> agents_lines, state_lines, action_lines, trans_lines;
  std::istringstream in{std::string(text)};
  std::size_t number = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    Line line{number, raw};
    const auto first = raw.substr(0, raw.find_first_of(" \t:"));
    if (first == "agents") agents_lines.push_back(line);
    else if (first == "state") state_lines.push_back(line);
    else if (first == "actions") action_lines.push_back(line);
    else if (first == "trans") trans_lines.push_back(line);
    else line_error(line, "unknown directive '" + first + "'");
  }
  if (agents_lines.size() != 1) throw ModelError("expected exactly one 'agents: k' line");

  const Line& al = agents_lines.front();
  const auto colon = al.text.find(':');
  if (colon == std::string::npos) line_error(al, "expected 'agents: k'");
  const int k = parse_int(al, trim(al.text.substr(colon + 1)));
  if (k < 1) line_error(al, "a model needs at least one agent");
  ExplicitCGM model(k);

  for (const auto& line : state_lines) {
    std::string rest = line.text.substr(5);
    for (char& c : rest) {
      if (c == '[' || c == ']' || c == ',') c = ' ';
    }
    auto words = split_ws(rest);
    if (words.empty()) line_error(line, "state declaration without a name");
    const std::string name = words.front();
    words.erase(words.begin());
    try {
      model.add_state(name, std::move(words));
    } catch (const ModelError& e) {
      line_error(line, e.what());
    }
  }

  for (const auto& line : action_lines) {
    const auto colon_pos = line.text.find(':');
    if (colon_pos == std::string::npos) line_error(line, "expected 'actions <state> <agent>: a1 a2 ...'");
    const auto head = split_ws(line.text.substr(7, colon_pos - 7));
    if (head.size() != 2) line_error(line, "expected 'actions <state> <agent>: a1 a2 ...'");
    const int agent = parse_int(line, head[1]);
    try {
      model.set_actions(head[0], agent, split_ws(line.text.substr(colon_pos + 1)));
    } catch (const ModelError& e) {
      line_error(line, e.what());
    }
  }

  for (const auto& line : trans_lines) {
    const auto arrow = line.text.find("->");
    if (arrow == std::string::npos) line_error(line, "expected 'trans <state> <a1,...,ak> -> <state>'");
    const auto lhs = split_ws(line.text.substr(5, arrow - 5));
    const auto rhs = split_ws(line.text.substr(arrow + 2));
    if (lhs.size() < 2 || rhs.size() != 1) line_error(line, "expected 'trans <state> <a1,...,ak> -> <state>'");
    std::string joined;
    for (std::size_t i = 1; i < lhs.size(); ++i) joined += lhs[i];
    if (joined.size() >= 2 && joined.front() == '<' && joined.back() == '>') joined = joined.substr(1, joined.size() - 2);
    GlobalMove move;
    std::size_t start = 0;
    while (true) {
      const auto comma = joined.find(',', start);
      move.actions.push_back(joined.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (static_cast<int>(move.actions.size()) != k) {
      line_error(line, "move " + to_string(move) + " does not have " + std::to_string(k) + " actions");
    }
    try {
      model.set_transition(lhs[0], move, rhs[0]);
    } catch (const ModelError& e) {
      line_error(line, e.what());
    }
  }

  model.validate();
  return model;
}

ExplicitCGM load_explicit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot read model file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return load_explicit(buffer.str());
  } catch (const ModelError& e) {
    throw ModelError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

std::vector<CoalitionMove> coalition_moves(const ModelProvider& provider, const StateKey& s,
                                           const Coalition& coalition) {
  const int k = provider.agent_count();
  for (AgentId a : coalition.members()) {
    if (a < 1 || a > k) throw ModelError("unknown agent " + std::to_string(a) + " in coalition");
  }
  std::vector<std::vector<Action>> choices;
  for (AgentId a : coalition.members()) choices.push_back(provider.available_actions(a, s));

  std::vector<CoalitionMove> moves;
  std::vector<std::size_t> odometer(choices.size(), 0);
  while (true) {
    CoalitionMove m{coalition, std::vector<Action>(k, std::string(kPlaceholder))};
    for (std::size_t i = 0; i < choices.size(); ++i) {
      m.actions[coalition.members()[i] - 1] = choices[i][odometer[i]];
    }
    moves.push_back(std::move(m));
    std::size_t pos = choices.size();
    while (pos > 0) {
      --pos;
      if (++odometer[pos] < choices[pos].size()) break;
      odometer[pos] = 0;
      if (pos == 0) return moves;
    }
    if (choices.empty()) return moves;
  }
}

Coalition complement(const Coalition& coalition, int agent_count) {
  std::vector<AgentId> rest;
  for (AgentId a = 1; a <= agent_count; ++a) {
    if (!coalition.contains(a)) rest.push_back(a);
  }
  return Coalition(std::move(rest));
}

GlobalMove merge(const CoalitionMove& a, const CoalitionMove& b) {
  if (a.actions.size() != b.actions.size()) throw ModelError("cannot merge moves of different length");
  GlobalMove g;
  g.actions.resize(a.actions.size());
  for (std::size_t i = 0; i < a.actions.size(); ++i) {
    const bool in_a = a.actions[i] != kPlaceholder;
    const bool in_b = b.actions[i] != kPlaceholder;
    if (in_a == in_b) throw ModelError("moves " + to_string(a) + " and " + to_string(b) + " do not partition the agents");
    g.actions[i] = in_a ? a.actions[i] : b.actions[i];
  }
  return g;
}

std::vector<StateKey> out_set(const ModelProvider& provider, const StateKey& s, const CoalitionMove& move) {
  const int k = provider.agent_count();
  if (static_cast<int>(move.actions.size()) != k) throw ModelError("coalition move has wrong length");
  for (AgentId a : move.coalition.members()) {
    const auto acts = provider.available_actions(a, s);
    if (std::find(acts.begin(), acts.end(), move.actions.at(a - 1)) == acts.end()) {
      throw ModelError("action '" + move.actions[a - 1] + "' of agent " + std::to_string(a) +
                       " not available at state '" + s + "'");
    }
  }
  std::vector<StateKey> result;
  for (const auto& answer : coalition_moves(provider, s, complement(move.coalition, k))) {
    StateKey target = provider.out(s, merge(move, answer));
    if (std::find(result.begin(), result.end(), target) == result.end()) result.push_back(std::move(target));
  }
  return result;
}

ExplicitCGM explore(const ModelProvider& provider, const StateKey& root, std::size_t max_states) {
  const int k = provider.agent_count();
  ExplicitCGM model(k);
  std::deque<StateKey> queue{root};
  model.add_state(root, provider.labeling(root));
  std::vector<std::pair<StateKey, std::pair<GlobalMove, StateKey>>> edges;
  while (!queue.empty()) {
    const StateKey s = queue.front();
    queue.pop_front();
    for (AgentId a = 1; a <= k; ++a) model.set_actions(s, a, provider.available_actions(a, s));
    for (const auto& g : coalition_moves(provider, s, complement(Coalition{}, k))) {
      GlobalMove move{g.actions};
      StateKey target = provider.out(s, move);
      if (!model.has_state(target)) {
        if (model.state_count() >= max_states) throw ModelError("explored fragment exceeds state limit");
        model.add_state(target, provider.labeling(target));
        queue.push_back(target);
      }
      edges.push_back({s, {std::move(move), std::move(target)}});
    }
  }
  for (const auto& [s, rest] : edges) model.set_transition(s, rest.first, rest.second);
  model.validate();
  return model;
}

}  // namespace atlplus
