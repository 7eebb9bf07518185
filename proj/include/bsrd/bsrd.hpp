#pragma once

// Bulk-surface reaction-diffusion: mesh, model, solver, diagnostics and batch front end.

#include "bsrd/clamp_window.hpp"
#include "bsrd/config.hpp"
#include "bsrd/diagnostics.hpp"
#include "bsrd/diffusion_law.hpp"
#include "bsrd/equilibrium.hpp"
#include "bsrd/io.hpp"
#include "bsrd/kinetics.hpp"
#include "bsrd/log_mean.hpp"
#include "bsrd/mesh.hpp"
#include "bsrd/operators.hpp"
#include "bsrd/setup.hpp"
#include "bsrd/simulation.hpp"
#include "bsrd/stepper.hpp"
