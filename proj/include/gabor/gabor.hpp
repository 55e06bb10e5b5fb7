#pragma once

#include "gabor/dual_synthesis.hpp"
#include "gabor/duality.hpp"
#include "gabor/errors.hpp"
#include "gabor/frame_atlas.hpp"
#include "gabor/grid_function.hpp"
#include "gabor/io.hpp"
#include "gabor/membership.hpp"
#include "gabor/window.hpp"
