#pragma once

#include "olab/error.hpp"
#include "olab/geometry.hpp"
#include "olab/random.hpp"
#include "olab/expr.hpp"
#include "olab/spatial_field.hpp"
#include "olab/phi.hpp"
#include "olab/phi_checks.hpp"
#include "olab/grid.hpp"
#include "olab/orlicz.hpp"
#include "olab/sbv.hpp"
#include "olab/rearrangement.hpp"
#include "olab/poincare.hpp"
#include "olab/corpus.hpp"
#include "olab/functionals.hpp"
#include "olab/cell_formula.hpp"
#include "olab/catalog.hpp"
#include "olab/descriptor.hpp"
#include "olab/report.hpp"
#include "olab/config.hpp"
#include "olab/calibration.hpp"
