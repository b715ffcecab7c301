#include "lpm/process_tree.hpp"

#include <algorithm>
#include <cctype>

#include "lpm/error.hpp"

namespace lpm {
namespace {

constexpr const char* kModule = "discovery";

std::string_view keyword(ProcessTree::Kind kind) {
  switch (kind) {
    case ProcessTree::Kind::sequence: return "seq";
    case ProcessTree::Kind::exclusive: return "xor";
    case ProcessTree::Kind::concurrent: return "and";
    case ProcessTree::Kind::loop: return "loop";
    case ProcessTree::Kind::tau: return "tau";
    case ProcessTree::Kind::activity: break;
  }
  return "";
}

bool plain_identifier(const std::string& s) {
  if (s.empty() || s == "seq" || s == "xor" || s == "and" || s == "loop" || s == "tau") return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == ':';
  });
}

}  // namespace

ProcessTree ProcessTree::leaf(std::string activity) {
  if (activity.empty()) throw ConfigError(kModule, "activity leaf with an empty label");
  ProcessTree t;
  t.kind_ = Kind::activity;
  t.activity_ = std::move(activity);
  return t;
}

ProcessTree ProcessTree::tau() { return ProcessTree{}; }

ProcessTree ProcessTree::node(Kind kind, std::vector<ProcessTree> children) {
  if (kind == Kind::activity || kind == Kind::tau) throw ConfigError(kModule, "node() needs an operator kind");
  if (children.size() < 2) throw ConfigError(kModule, std::string(keyword(kind)) + " needs at least two children");
  if (kind == Kind::loop && children.size() != 2) throw ConfigError(kModule, "loop takes exactly a body and a redo child");
  ProcessTree t;
  t.kind_ = kind;
  t.children_ = std::move(children);
  return t;
}

ProcessTree ProcessTree::repeat(std::string activity) {
  return node(Kind::loop, {leaf(std::move(activity)), tau()});
}

bool ProcessTree::is_repeat() const {
  if (kind_ == Kind::activity) return true;
  return kind_ == Kind::loop && children_[0].kind_ == Kind::activity && children_[1].kind_ == Kind::tau;
}

std::size_t ProcessTree::activity_count() const {
  if (kind_ == Kind::activity) return 1;
  std::size_t n = 0;
  for (const auto& c : children_) n += c.activity_count();
  return n;
}

std::set<std::string> ProcessTree::activities() const {
  std::set<std::string> out;
  if (kind_ == Kind::activity) out.insert(activity_);
  for (const auto& c : children_) {
    auto sub = c.activities();
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

ProcessTree ProcessTree::canonical() const {
  if (is_leaf()) return *this;
  std::vector<ProcessTree> flat;
  for (const auto& c : children_) {
    ProcessTree cc = c.canonical();
    if (kind_ != Kind::loop && cc.kind_ == kind_) {
      for (auto& g : cc.children_) flat.push_back(std::move(g));
    } else {
      flat.push_back(std::move(cc));
    }
  }
  if (kind_ == Kind::exclusive || kind_ == Kind::concurrent) {
    std::vector<std::pair<std::string, ProcessTree>> keyed;
    for (auto& c : flat) keyed.emplace_back(c.to_string(), std::move(c));
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    flat.clear();
    for (auto& [k, c] : keyed) flat.push_back(std::move(c));
  }
  return node(kind_, std::move(flat));
}

std::string ProcessTree::to_string() const {
  if (kind_ == Kind::activity) {
    if (plain_identifier(activity_)) return activity_;
    std::string out = "'";
    for (char c : activity_) {
      if (c == '\'' || c == '\\') out += '\\';
      out += c;
    }
    return out + "'";
  }
  if (kind_ == Kind::tau) return "tau";
  std::string out(keyword(kind_));
  out += '(';
  for (std::size_t i = 0; i < children_.size(); ++i) {
    if (i) out += ',';
    out += children_[i].to_string();
  }
  return out + ')';
}

namespace {

class TreeParser {
 public:
  explicit TreeParser(std::string_view text) : text_(text) {}

  ProcessTree parse() {
    ProcessTree t = parse_node();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(kModule, "process tree '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  ProcessTree parse_node() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] == '\'' || text_[pos_] == '"') return ProcessTree::leaf(parse_quoted());
    std::string word;
    if (text_.substr(pos_, 2) == "->") {
      word = "->";
      pos_ += 2;
    } else if (text_[pos_] == '+' || text_[pos_] == '*') {
      word = std::string(1, text_[pos_++]);
    } else {
      while (pos_ < text_.size()) {
        char c = text_[pos_];
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == ':')) break;
        word += c;
        ++pos_;
      }
    }
    if (word.empty()) fail("expected an activity or operator");
    skip_space();
    bool call = pos_ < text_.size() && text_[pos_] == '(';
    if (!call) {
      if (word == "tau") return ProcessTree::tau();
      if (word == "->" || word == "+" || word == "*") fail("operator '" + word + "' needs arguments");
      return ProcessTree::leaf(word);
    }
    ProcessTree::Kind kind;
    if (word == "seq" || word == "->") kind = ProcessTree::Kind::sequence;
    else if (word == "xor" || word == "X") kind = ProcessTree::Kind::exclusive;
    else if (word == "and" || word == "+") kind = ProcessTree::Kind::concurrent;
    else if (word == "loop" || word == "*") kind = ProcessTree::Kind::loop;
    else fail("unknown operator '" + word + "'");
    ++pos_;
    std::vector<ProcessTree> children;
    while (true) {
      children.push_back(parse_node());
      skip_space();
      if (pos_ >= text_.size()) fail("unterminated argument list");
      if (text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      fail("expected ',' or ')'");
    }
    try {
      return ProcessTree::node(kind, std::move(children));
    } catch (const ConfigError& e) {
      fail(std::string(e.what()).substr(e.module().size() + 3));
    }
  }

  std::string parse_quoted() {
    char quote = text_[pos_++];
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != quote) {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      out += text_[pos_++];
    }
    if (pos_ >= text_.size()) fail("unterminated quoted activity");
    ++pos_;
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool candidate_shape(const ProcessTree& t) {
  switch (t.kind()) {
    case ProcessTree::Kind::activity: return true;
    case ProcessTree::Kind::tau: return false;
    case ProcessTree::Kind::loop: {
      const auto& redo = t.children()[1];
      if (redo.kind() == ProcessTree::Kind::tau) return t.children()[0].kind() == ProcessTree::Kind::activity;
      return redo.kind() == ProcessTree::Kind::activity && candidate_shape(t.children()[0]);
    }
    default:
      return std::all_of(t.children().begin(), t.children().end(), candidate_shape);
  }
}

class NetBuilder {
 public:
  PlaceIndex place() { return net_.add_place("p" + std::to_string(places_++)); }

  void build(const ProcessTree& t, PlaceIndex in, PlaceIndex out) {
    switch (t.kind()) {
      case ProcessTree::Kind::activity:
        arc(in, out, t.activity());
        break;
      case ProcessTree::Kind::tau:
        arc(in, out, std::nullopt);
        break;
      case ProcessTree::Kind::sequence: {
        PlaceIndex cursor = in;
        for (std::size_t i = 0; i + 1 < t.children().size(); ++i) {
          PlaceIndex mid = place();
          build(t.children()[i], cursor, mid);
          cursor = mid;
        }
        build(t.children().back(), cursor, out);
        break;
      }
      case ProcessTree::Kind::exclusive:
        for (const auto& c : t.children()) build(c, in, out);
        break;
      case ProcessTree::Kind::concurrent: {
        TransitionIndex split = transition(std::nullopt);
        TransitionIndex join = transition(std::nullopt);
        net_.add_input_arc(in, split);
        net_.add_output_arc(join, out);
        for (const auto& c : t.children()) {
          PlaceIndex a = place(), b = place();
          net_.add_output_arc(split, a);
          build(c, a, b);
          net_.add_input_arc(b, join);
        }
        break;
      }
      case ProcessTree::Kind::loop: {
        PlaceIndex body_in = place(), body_out = place();
        arc(in, body_in, std::nullopt);
        build(t.children()[0], body_in, body_out);
        build(t.children()[1], body_out, body_in);
        arc(body_out, out, std::nullopt);
        break;
      }
    }
  }

  PetriNet take() { return std::move(net_); }

 private:
  TransitionIndex transition(std::optional<std::string> label) {
    std::string id = label ? "t" + std::to_string(transitions_++) : "tau" + std::to_string(taus_++);
    return net_.add_transition(std::move(id), std::move(label));
  }

  void arc(PlaceIndex in, PlaceIndex out, std::optional<std::string> label) {
    TransitionIndex t = transition(std::move(label));
    net_.add_input_arc(in, t);
    net_.add_output_arc(t, out);
  }

  PetriNet net_;
  std::size_t places_ = 0, transitions_ = 0, taus_ = 0;
};

// Possible last activities, and whether the empty word is possible.
std::pair<std::set<std::string>, bool> ends(const ProcessTree& t) {
  switch (t.kind()) {
    case ProcessTree::Kind::activity: return {{t.activity()}, false};
    case ProcessTree::Kind::tau: return {{}, true};
    case ProcessTree::Kind::sequence: {
      std::set<std::string> last;
      for (auto it = t.children().rbegin(); it != t.children().rend(); ++it) {
        auto [s, nullable] = ends(*it);
        last.insert(s.begin(), s.end());
        if (!nullable) return {last, false};
      }
      return {last, true};
    }
    case ProcessTree::Kind::exclusive:
    case ProcessTree::Kind::concurrent: {
      std::set<std::string> last;
      bool any_nullable = false, all_nullable = true;
      for (const auto& c : t.children()) {
        auto [s, nullable] = ends(c);
        last.insert(s.begin(), s.end());
        any_nullable = any_nullable || nullable;
        all_nullable = all_nullable && nullable;
      }
      return {last, t.kind() == ProcessTree::Kind::exclusive ? any_nullable : all_nullable};
    }
    case ProcessTree::Kind::loop: {
      // body (redo body)*: the word always ends inside the body; when the body
      // can be empty, the redo part may end it.
      auto [body, body_nullable] = ends(t.children()[0]);
      if (body_nullable) {
        auto [redo, redo_nullable] = ends(t.children()[1]);
        body.insert(redo.begin(), redo.end());
      }
      return {body, body_nullable};
    }
  }
  return {{}, false};
}

}  // namespace

ProcessTree parse_process_tree(std::string_view text) { return TreeParser(text).parse(); }

bool is_candidate_tree(const ProcessTree& tree) {
  return candidate_shape(tree) && tree.activities().size() == tree.activity_count();
}

AcceptingPetriNet tree_to_apn(const ProcessTree& tree) {
  NetBuilder builder;
  PlaceIndex source = builder.place();
  PlaceIndex sink = builder.place();
  builder.build(tree, source, sink);
  PetriNet net = builder.take();
  Marking initial(net.places().size());
  initial[source] = 1;
  Marking final_marking(net.places().size());
  final_marking[sink] = 1;
  return AcceptingPetriNet(std::move(net), std::move(initial), {std::move(final_marking)});
}

std::set<std::string> final_activities(const ProcessTree& tree) { return ends(tree).first; }

}  // namespace lpm
