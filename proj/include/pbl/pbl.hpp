#pragma once

#include "pbl/bogoliubov.hpp"
#include "pbl/commands.hpp"
#include "pbl/config.hpp"
#include "pbl/constraint_solver.hpp"
#include "pbl/error.hpp"
#include "pbl/fock.hpp"
#include "pbl/quadrature.hpp"
#include "pbl/wavefunction.hpp"
