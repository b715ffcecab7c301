#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "lpm/petri.hpp"

namespace lpm {

/// Reads the place/transition/arc/name subset of PNML. Initial tokens come
/// from <initialMarking>; final markings from the ProM-style
/// <finalmarkings><marking><place idref=..><text>n</text></place>.. block.
/// A transition is silent when it carries
/// <toolspecific activity="$invisible$"/> or has no name.
AcceptingPetriNet parse_pnml(std::istream& in, const std::string& source = "<pnml>");

void write_pnml(std::ostream& out, const AcceptingPetriNet& apn, const std::string& name = "lpm");

}  // namespace lpm
