// simplexpow
// Copyright 2026 simplexpow contributors
// Licensed under Apache 2.0

#pragma once

#include "simplexpow/conic_core.hpp"
#include "simplexpow/ipm_solver.hpp"
#include "simplexpow/relaxations.hpp"
#include "simplexpow/analytic.hpp"
#include "simplexpow/rng.hpp"
#include "simplexpow/oracle.hpp"
#include "simplexpow/probability.hpp"
#include "simplexpow/io.hpp"
#include "simplexpow/harness.hpp"
