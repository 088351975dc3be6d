#pragma once

#include "nilcat/tolerances.hpp"
#include "nilcat/roots.hpp"
#include "nilcat/quadrature.hpp"
#include "nilcat/ode.hpp"
#include "nilcat/nilgeometry.hpp"
#include "nilcat/profile.hpp"
#include "nilcat/jacobi.hpp"
#include "nilcat/stability.hpp"
#include "nilcat/index.hpp"
#include "nilcat/highdim.hpp"
