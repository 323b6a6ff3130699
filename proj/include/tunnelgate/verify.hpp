#pragma once

#include "tunnelgate/verify/ode.hpp"
#include "tunnelgate/verify/quadrature.hpp"
#include "tunnelgate/verify/residual.hpp"
#include "tunnelgate/verify/wkb.hpp"
