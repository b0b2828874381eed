#include "idgnn/errors.hpp"

namespace idgnn {

ParseError::ParseError(const std::string& what, std::size_t line)
    : InputError(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

}  // namespace idgnn
