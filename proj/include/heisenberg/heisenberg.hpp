#pragma once

#include "heisenberg/errors.hpp"
#include "heisenberg/group_model.hpp"
#include "heisenberg/geometry.hpp"
#include "heisenberg/phase.hpp"
#include "heisenberg/quadrature.hpp"
#include "heisenberg/quadrature_kernel.hpp"
#include "heisenberg/asymptotics.hpp"
#include "heisenberg/bessel_core.hpp"
#include "heisenberg/bounds.hpp"
#include "heisenberg/config.hpp"
