#pragma once

#include <string_view>
#include <vector>

#include "attackforge/diagnostic.hpp"
#include "attackforge/pim.hpp"

namespace attackforge {

/// Structural checks on a service template: preamble present, requirement
/// targets resolve, Port shape, AbstractScript forms one linear chain, every
/// activity names a declared operation and every step targets a HostSystem.
std::vector<Diagnostic> validate_template(const ServiceTemplate& tpl);

/// Reads a template written by emit_service_template. Throws SyntaxError
/// for malformed YAML and E-TOSCA-UNSUPPORTED for constructs outside the
/// emitted subset.
ServiceTemplate parse_service_template(std::string_view text);

}  // namespace attackforge
