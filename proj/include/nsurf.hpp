#pragma once

#include "nsurf/error.hpp"
#include "nsurf/perm.hpp"
#include "nsurf/triangulation.hpp"
#include "nsurf/normal_coords.hpp"
#include "nsurf/enumeration.hpp"
#include "nsurf/surface.hpp"
#include "nsurf/slopes.hpp"
#include "nsurf/morse.hpp"
