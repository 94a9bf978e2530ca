#ifndef LWLITE_EQUIV_HPP
#define LWLITE_EQUIV_HPP

#include <string>

#include "lwlite/types.hpp"

namespace lwlite {

// Alpha-equivalence with row tolerance: distinct labels may appear in any
// order, duplicate labels are compared in order, variables must map
// bijectively. Constraint sets are compared as multisets keyed by
// (display base, form).
bool type_equiv(const Type& a, const Type& b);
bool constrained_equiv(const ConstraintSet& ca, const Type& ta, const ConstraintSet& cb,
                       const Type& tb);
bool scheme_equiv(const Scheme& a, const Scheme& b);

// Parses the printed-scheme grammar (`{ k : t; ... } => t` or a bare type)
// into a constraint set and body over fresh variables. Throws parse_error /
// type_error on malformed text.
std::pair<ConstraintSet, Type> parse_printed_scheme(const std::string& text, Session& session);

}  // namespace lwlite

#endif
