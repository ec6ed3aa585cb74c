#pragma once

#include "curvegeom/curve.hpp"
#include "curvegeom/error.hpp"
#include "curvegeom/fourier.hpp"
#include "curvegeom/framing.hpp"
#include "curvegeom/global_geometry.hpp"
#include "curvegeom/io.hpp"
#include "curvegeom/strip_family.hpp"
#include "curvegeom/sweep.hpp"
