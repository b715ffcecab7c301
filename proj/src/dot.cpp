#include "lpm/dot.hpp"

namespace lpm {
namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_dot(std::ostream& out, const AcceptingPetriNet& apn, const std::string& title) {
  const PetriNet& net = apn.net();
  std::vector<bool> final_place(net.places().size(), false);
  for (const auto& m : apn.finals())
    for (PlaceIndex p = 0; p < net.places().size(); ++p)
      if (m[p] > 0) final_place[p] = true;

  out << "digraph " << quoted(title) << " {\n"
      << "  rankdir=LR;\n"
      << "  node [fontname=\"Helvetica\"];\n";
  for (PlaceIndex p = 0; p < net.places().size(); ++p) {
    out << "  " << quoted("p:" + net.places()[p].id) << " [shape=circle, width=0.35, fixedsize=true, label=";
    auto tokens = apn.initial()[p];
    if (tokens == 1) out << quoted("●");
    else if (tokens > 1) out << quoted(std::to_string(tokens));
    else out << "\"\"";
    if (final_place[p]) out << ", style=filled, fillcolor=\"gray80\", peripheries=2";
    out << "];\n";
  }
  for (const auto& t : net.transitions()) {
    out << "  " << quoted("t:" + t.id);
    if (t.invisible()) {
      out << " [shape=box, style=filled, fillcolor=black, label=\"\", width=0.12, height=0.4];\n";
    } else {
      out << " [shape=box, label=" << quoted(*t.label) << "];\n";
    }
  }
  for (TransitionIndex t = 0; t < net.transitions().size(); ++t) {
    for (PlaceIndex p : net.preset(t))
      out << "  " << quoted("p:" + net.places()[p].id) << " -> " << quoted("t:" + net.transitions()[t].id) << ";\n";
    for (PlaceIndex p : net.postset(t))
      out << "  " << quoted("t:" + net.transitions()[t].id) << " -> " << quoted("p:" + net.places()[p].id) << ";\n";
  }
  out << "}\n";
}

}  // namespace lpm
