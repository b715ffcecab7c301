#pragma once

#include <ostream>
#include <string>

#include "lpm/petri.hpp"

namespace lpm {

/// Graphviz rendering of an accepting net: silent transitions as small filled
/// black boxes, initially marked places with a token, final places shaded.
void write_dot(std::ostream& out, const AcceptingPetriNet& apn, const std::string& title = "lpm");

}  // namespace lpm
