#pragma once

#include <optional>
#include <string>
#include <vector>

#include "transops/function.hpp"
#include "transops/spectral.hpp"

namespace transops {

/// Named constructor entry: "absnorm", "abs-power:a", "gaussian:c",
/// "cusp:x0", "ridge:n:y1,y2,..." (ball only; y is normalized to the unit
/// sphere and the Gegenbauer index is the weight's lambda+mu).
struct FunctionRegistryEntry {
    std::string name;
    FnDomain domain;
    std::string smoothness; // annotation for expected-rate reporting
};

/// Instantiates a registry function on the given domain. `weight` is needed
/// for weight-dependent entries (ridge).
FunctionHandle make_registry_function(const std::string& spec, FnDomain domain, int dim,
                                      const std::optional<Weight>& weight = std::nullopt);

/// Parses "ridge:3:0.6,0.8" etc.; returns the entry metadata.
FunctionRegistryEntry registry_entry(const std::string& spec, FnDomain domain);

std::vector<std::string> registry_names();

} // namespace transops
