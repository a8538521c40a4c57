#include "scenarios_internal.hpp"

namespace frechet::runner {

const Registry& builtin_registry() {
  static const Registry registry = [] {
    Registry r;
    detail::register_metric_scenarios(r);
    detail::register_operator_scenarios(r);
    detail::register_contraction_scenarios(r);
    detail::register_inverse_scenarios(r);
    detail::register_global_scenarios(r);
    detail::register_ode_scenarios(r);
    return r;
  }();
  return registry;
}

}  // namespace frechet::runner
