#pragma once

#include "hyperflow/errors.hpp"
#include "hyperflow/poly.hpp"
#include "hyperflow/curve.hpp"
#include "hyperflow/quadrature.hpp"
#include "hyperflow/periods.hpp"
#include "hyperflow/flow.hpp"
#include "hyperflow/identities.hpp"
#include "hyperflow/apps.hpp"
#include "hyperflow/comb.hpp"

namespace hyperflow {

inline constexpr const char* version = "0.1.0";

}  // namespace hyperflow
