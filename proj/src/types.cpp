#include "ndd/types.hpp"

namespace ndd {

std::string variable_name(Variable v) {
  switch (v) {
    case Variable::EgoSpeed:
      return "v_e";
    case Variable::EgoAccel:
      return "a_e";
    case Variable::RelSpeed:
      return "delta_v";
    case Variable::RelDistance:
      return "delta_d";
  }
  throw ConfigError("invalid variable enum value");
}

Variable variable_from_name(const std::string& name) {
  for (Variable v : kAllVariables) {
    if (variable_name(v) == name) return v;
  }
  throw ConfigError("unknown variable '" + name +
                    "' (expected one of v_e, a_e, delta_v, delta_d)");
}

}  // namespace ndd
