#pragma once

#include "interval.hpp"
#include "primitive.hpp"
#include "weight.hpp"
#include "measure.hpp"
#include "parse.hpp"
#include "piecewise_linear.hpp"
#include "grid.hpp"
#include "report.hpp"
#include "functionals.hpp"
#include "verify.hpp"
