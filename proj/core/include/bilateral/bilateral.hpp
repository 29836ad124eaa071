#pragma once

#include "bilateral/box_vi.hpp"
#include "bilateral/control.hpp"
#include "bilateral/control_opt.hpp"
#include "bilateral/counterexample.hpp"
#include "bilateral/derivatives.hpp"
#include "bilateral/errors.hpp"
#include "bilateral/grid.hpp"
#include "bilateral/instances.hpp"
#include "bilateral/io.hpp"
#include "bilateral/linalg.hpp"
#include "bilateral/multiplier_sets.hpp"
#include "bilateral/operator.hpp"
#include "bilateral/rng.hpp"
#include "bilateral/vi_solver.hpp"
