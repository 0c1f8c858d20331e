#pragma once

#include "gridcross/constructions.hpp"
#include "gridcross/crossings.hpp"
#include "gridcross/enumeration.hpp"
#include "gridcross/errors.hpp"
#include "gridcross/experiment.hpp"
#include "gridcross/geom.hpp"
#include "gridcross/grid_graph.hpp"
#include "gridcross/numtheory.hpp"
