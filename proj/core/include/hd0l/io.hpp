#pragma once

#include <string>
#include <string_view>

#include "hd0l/driver.hpp"

namespace hd0l {

/// Reads the five-member JSON document {"A", "B", "sigma", "phi", "w"}.
/// Every violation is collected; the ValidationError message lists them
/// one per line, each prefixed by its location.
HD0LSystem parse_system(std::string_view text);

/// Inverse of parse_system; members and mapping keys follow alphabet order.
std::string serialize_system(const HD0LSystem& system, int indent = 2);

std::string verdict_document(const DecisionOutcome& outcome, int indent = 2);
std::string representation_document(const SubstitutiveRepresentation& rep, int indent = 2);
std::string analysis_document(const Morphism& sigma, int indent = 2);

} // namespace hd0l
