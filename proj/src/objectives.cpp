#include "clr/objectives.hpp"

namespace clr {

const char* to_string(LossMode mode) {
  switch (mode) {
    case LossMode::MlmOnly: return "mlm";
    case LossMode::ClOnly: return "cl";
    case LossMode::MlmPlusCl: return "mlm+cl";
  }
  return "?";
}

LossMode loss_mode_from_string(const std::string& name) {
  if (name == "mlm") return LossMode::MlmOnly;
  if (name == "cl") return LossMode::ClOnly;
  if (name == "mlm+cl") return LossMode::MlmPlusCl;
  throw std::invalid_argument("unknown loss mode: " + name);
}

}  // namespace clr
