#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "halcor/box.hpp"

namespace halcor {

// An inline evidence annotation: `entity([x1,y1,x2,y2];[...])`.
struct Annotation {
  std::string entity;
  std::vector<BoundingBox> boxes;
  std::size_t offset = 0;  // position of the opening parenthesis

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct AnnotationDiagnostic {
  std::size_t offset = 0;
  std::string message;

  friend bool operator==(const AnnotationDiagnostic&, const AnnotationDiagnostic&) = default;
};

struct AnnotationScan {
  std::vector<Annotation> annotations;
  std::vector<AnnotationDiagnostic> diagnostics;
};

// Greedy left-to-right scan. A candidate is a '(' whose first non-space
// character is '['. The entity is the word right before it (spaces allowed in
// between). Candidates with non-numeric or out-of-range coordinates, x1 >= x2,
// y1 >= y2, a missing entity or a broken bracket structure become diagnostics
// and are not accepted.
AnnotationScan parse_annotations(std::string_view text);

// Removes every well-formed annotation (and the spaces that separated it from
// its entity) until none is left. Malformed candidates stay as they are.
// strip(strip(t)) == strip(t) and parse_annotations(strip(t)) has no annotations.
std::string strip_annotations(std::string_view text);

}  // namespace halcor
