#include "clr/optim/adam.hpp"

namespace clr {

const char* to_string(WeightDecayStyle style) {
  return style == WeightDecayStyle::Decoupled ? "decoupled" : "l2";
}

WeightDecayStyle wd_style_from_string(const std::string& name) {
  if (name == "decoupled") return WeightDecayStyle::Decoupled;
  if (name == "l2") return WeightDecayStyle::L2;
  throw std::invalid_argument("unknown weight decay style: " + name);
}

}  // namespace clr
