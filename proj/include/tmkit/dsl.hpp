// SPDX-License-Identifier: Apache-2.0
//
// Textual model language (.tm files):
//
//   bundle   := "model" IDENT ("strict" | "simplified")? "{" (thimac | edge)* "}"
//               events? behavior?
//   thimac   := "thimac" IDENT "{" (thimac | action)* "}"
//   action   := KIND IDENT STRING? ";"
//   edge     := ("flow" | "trigger") PATH "->" PATH ("@" INT)? ";"
//   events   := "events" "{" event* "}"
//   event    := "event" IDENT STRING? "{" "region" ":" PATH ("," PATH)* ";"
//               ("time" ":" STRING ";")? "}"
//   behavior := "behavior" "{" (IDENT "->" IDENT ("[" "repeat" "<=" INT "]")? ";")* "}"
//   PATH     := IDENT ("." IDENT)*
//
// `//` starts a comment running to end of line.
#pragma once

#include <string>
#include <string_view>

#include "tmkit/bundle.hpp"

namespace tmkit {

struct ParseOptions {
  std::string file = "<input>";
  bool allow_disconnected_regions = false;
};

/// Throws PARSE (with span and expected-token hint), DUPID, UNDEF and
/// REGION_DISCONNECTED, each carrying the span of the offending token.
ModelBundle parse(std::string_view text, const ParseOptions& options = {});

/// Canonical text: two-space indentation, one declaration per line, actions
/// before sub-thimacs, comments dropped.
std::string print(const ModelBundle& bundle);

}  // namespace tmkit
