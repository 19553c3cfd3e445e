#include "acbench/error.hpp"

#include <utility>

namespace acbench {

StageError::StageError(std::string stage, const std::string& what)
    : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}

}  // namespace acbench
