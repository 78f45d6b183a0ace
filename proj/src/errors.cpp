#include "macsim/errors.hpp"

namespace macsim {

ValidationError::ValidationError(std::string field, const std::string& what)
    : Error("field " + field + ": " + what), field_(std::move(field)) {}

CorruptionError::CorruptionError(std::int64_t frame, const std::string& what)
    : Error("frame " + std::to_string(frame) + ": " + what), frame_(frame) {}

}  // namespace macsim
