#pragma once

#include <optional>
#include <string>

#include "limkit/covering.hpp"
#include "limkit/fiber.hpp"

namespace limkit {

/// Parsed input file: a poset plus optional diagram, group diagram and
/// family sections. Sections are line oriented; '#' starts a comment.
struct InputDocument {
  std::optional<GradedPoset> poset;
  std::optional<AbDiagram> diagram;
  std::optional<GroupDiagram> group_diagram;
  std::optional<CoveringFamily> family_j;
  std::optional<GlobalFamily> family_k;
};

/// Parse a document; g0_override binds "g0 = external" in group diagrams.
/// Errors carry SyntaxError / UnknownReference / DimensionMismatch codes
/// with the offending line number.
InputDocument parse_document(const std::string& text,
                             const std::optional<std::string>& g0_override = std::nullopt);

std::string emit_document(const InputDocument& doc);

std::string group_to_string(const FgAbGroup& g);

}  // namespace limkit
