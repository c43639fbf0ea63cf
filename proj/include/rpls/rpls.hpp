#pragma once

#include "rpls/density.hpp"
#include "rpls/fundamental_matrix.hpp"
#include "rpls/gallery.hpp"
#include "rpls/io.hpp"
#include "rpls/linalg.hpp"
#include "rpls/orbit.hpp"
#include "rpls/pipeline.hpp"
#include "rpls/quadratic.hpp"
#include "rpls/scalar.hpp"
#include "rpls/simulate.hpp"
#include "rpls/step_function.hpp"
#include "rpls/system.hpp"
