#include "dp/warnings.hpp"

namespace dp::warnings {

std::vector<std::string>& sink() {
  thread_local std::vector<std::string> s;
  return s;
}

void emit(std::string message) { sink().push_back(std::move(message)); }

std::vector<std::string> drain() {
  auto out = std::move(sink());
  sink().clear();
  return out;
}

}  // namespace dp::warnings
