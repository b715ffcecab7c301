#include "lpm/pnml.hpp"

#include <charconv>
#include <functional>

#include "lpm/error.hpp"
#include "xml_dom.hpp"

namespace lpm {
namespace {

constexpr const char* kModule = "petri";

std::uint32_t parse_count(const std::string& text, const std::string& where) {
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw ParseError(kModule, where + ": bad token count '" + text + "'");
  }
  return v;
}

bool is_invisible(const xml::Element& transition) {
  for (const auto* ts : transition.children_named("toolspecific")) {
    if (auto a = ts->attribute("activity"); a && *a == "$invisible$") return true;
  }
  return false;
}

}  // namespace

AcceptingPetriNet parse_pnml(std::istream& in, const std::string& source) {
  auto root = xml::parse(in, kModule, source);
  const xml::Element* net_el = root->name == "net" ? root.get() : root->child("net");
  if (!net_el) throw ParseError(kModule, source + ": no <net> element");
  auto where = [&](const xml::Element& e) { return source + ":" + std::to_string(e.line); };

  std::vector<const xml::Element*> places, transitions, arcs;
  std::function<void(const xml::Element&)> collect = [&](const xml::Element& e) {
    for (const auto& c : e.children) {
      if (c->name == "place") places.push_back(c.get());
      else if (c->name == "transition") transitions.push_back(c.get());
      else if (c->name == "arc") arcs.push_back(c.get());
      else if (c->name == "page") collect(*c);
    }
  };
  collect(*net_el);

  PetriNet net;
  std::vector<std::uint32_t> initial_tokens;
  try {
    for (const auto* p : places) {
      const std::string* id = p->attribute("id");
      if (!id) throw ParseError(kModule, where(*p) + ": place without id");
      std::string name = p->child("name") ? p->child("name")->text_child() : std::string{};
      net.add_place(*id, name);
      std::uint32_t tokens = 0;
      if (const auto* im = p->child("initialMarking")) tokens = parse_count(im->text_child(), where(*im));
      initial_tokens.push_back(tokens);
    }
    for (const auto* t : transitions) {
      const std::string* id = t->attribute("id");
      if (!id) throw ParseError(kModule, where(*t) + ": transition without id");
      std::string name = t->child("name") ? t->child("name")->text_child() : std::string{};
      std::optional<std::string> label;
      if (!is_invisible(*t) && !name.empty()) label = name;
      net.add_transition(*id, label);
    }
    for (const auto* a : arcs) {
      const std::string* s = a->attribute("source");
      const std::string* t = a->attribute("target");
      if (!s || !t) throw ParseError(kModule, where(*a) + ": arc without source/target");
      if (const auto* ins = a->child("inscription"); ins && parse_count(ins->text_child(), where(*ins)) != 1) {
        throw ParseError(kModule, where(*a) + ": only unit arc weights are supported");
      }
      net.add_arc(*s, *t);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(kModule, source + ": " + std::string(e.what()).substr(e.module().size() + 3));
  }

  std::vector<Marking> finals;
  if (const auto* fms = net_el->child("finalmarkings")) {
    for (const auto* m : fms->children_named("marking")) {
      Marking final_marking(net.places().size());
      for (const auto* p : m->children_named("place")) {
        const std::string* ref = p->attribute("idref");
        if (!ref) throw ParseError(kModule, where(*p) + ": final marking place without idref");
        auto index = net.find_place(*ref);
        if (!index) throw ParseError(kModule, where(*p) + ": final marking refers to unknown place '" + *ref + "'");
        final_marking[*index] = parse_count(p->text_child(), where(*p));
      }
      finals.push_back(std::move(final_marking));
    }
  }
  if (finals.empty()) throw ParseError(kModule, source + ": no final marking declared");
  try {
    return AcceptingPetriNet(std::move(net), Marking(std::move(initial_tokens)), std::move(finals));
  } catch (const Error& e) {
    throw ParseError(kModule, source + ": " + std::string(e.what()).substr(e.module().size() + 3));
  }
}

void write_pnml(std::ostream& out, const AcceptingPetriNet& apn, const std::string& name) {
  const PetriNet& net = apn.net();
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<pnml>\n"
         "  <net id=\"" << xml::escape(name) << "\" type=\"http://www.pnml.org/version-2009/grammar/pnmlcoremodel\">\n"
         "    <name><text>" << xml::escape(name) << "</text></name>\n"
         "    <page id=\"page0\">\n";
  for (PlaceIndex p = 0; p < net.places().size(); ++p) {
    const auto& place = net.places()[p];
    out << "      <place id=\"" << xml::escape(place.id) << "\">\n"
        << "        <name><text>" << xml::escape(place.name.empty() ? place.id : place.name) << "</text></name>\n";
    if (apn.initial()[p] > 0) {
      out << "        <initialMarking><text>" << apn.initial()[p] << "</text></initialMarking>\n";
    }
    out << "      </place>\n";
  }
  for (const auto& t : net.transitions()) {
    out << "      <transition id=\"" << xml::escape(t.id) << "\">\n"
        << "        <name><text>" << xml::escape(t.label.value_or("tau")) << "</text></name>\n";
    if (t.invisible()) {
      out << "        <toolspecific tool=\"ProM\" version=\"6.4\" activity=\"$invisible$\"/>\n";
    }
    out << "      </transition>\n";
  }
  std::size_t arc = 0;
  for (TransitionIndex t = 0; t < net.transitions().size(); ++t) {
    const auto& tid = net.transitions()[t].id;
    for (PlaceIndex p : net.preset(t)) {
      out << "      <arc id=\"a" << arc++ << "\" source=\"" << xml::escape(net.places()[p].id) << "\" target=\""
          << xml::escape(tid) << "\"/>\n";
    }
    for (PlaceIndex p : net.postset(t)) {
      out << "      <arc id=\"a" << arc++ << "\" source=\"" << xml::escape(tid) << "\" target=\""
          << xml::escape(net.places()[p].id) << "\"/>\n";
    }
  }
  out << "    </page>\n    <finalmarkings>\n";
  for (const auto& m : apn.finals()) {
    out << "      <marking>\n";
    for (PlaceIndex p = 0; p < net.places().size(); ++p) {
      if (m[p] > 0) {
        out << "        <place idref=\"" << xml::escape(net.places()[p].id) << "\"><text>" << m[p]
            << "</text></place>\n";
      }
    }
    out << "      </marking>\n";
  }
  out << "    </finalmarkings>\n  </net>\n</pnml>\n";
}

}  // namespace lpm
