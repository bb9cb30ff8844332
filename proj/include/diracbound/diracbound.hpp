// Copyright 2026 The diracbound Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "diracbound/dirac_solver.hpp"
#include "diracbound/errors.hpp"
#include "diracbound/functionals.hpp"
#include "diracbound/nr_solver.hpp"
#include "diracbound/perturbation.hpp"
#include "diracbound/potentials.hpp"
#include "diracbound/quadrature.hpp"
#include "diracbound/resummation.hpp"
