#pragma once

#include "boxlasso/denoise.hpp"
#include "boxlasso/errors.hpp"
#include "boxlasso/geometry.hpp"
#include "boxlasso/io.hpp"
#include "boxlasso/matrix.hpp"
#include "boxlasso/model.hpp"
#include "boxlasso/multipliers.hpp"
#include "boxlasso/rng.hpp"
#include "boxlasso/solvers.hpp"
#include "boxlasso/verify.hpp"
