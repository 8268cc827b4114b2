#pragma once

#include "conicon/errors.hpp"
#include "conicon/numeric.hpp"
#include "conicon/poly.hpp"
#include "conicon/expr.hpp"
#include "conicon/conic.hpp"
#include "conicon/intersect.hpp"
#include "conicon/program.hpp"
#include "conicon/planner.hpp"
#include "conicon/executor.hpp"
#include "conicon/trace.hpp"
#include "conicon/render.hpp"
