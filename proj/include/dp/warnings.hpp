#pragma once

#include <string>
#include <vector>

namespace dp::warnings {

/// Thread-local collector for non-fatal runtime warnings (boundary leakage,
/// under-resolved mollifiers, ...). Scenarios drain it into the manifest.
std::vector<std::string>& sink();
void emit(std::string message);
std::vector<std::string> drain();

}  // namespace dp::warnings
