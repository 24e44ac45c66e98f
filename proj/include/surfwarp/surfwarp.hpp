#pragma once

#include "surfwarp/config.hpp"
#include "surfwarp/contact_sim.hpp"
#include "surfwarp/geometry.hpp"
#include "surfwarp/io.hpp"
#include "surfwarp/metrics.hpp"
#include "surfwarp/offline_warp.hpp"
#include "surfwarp/online_exec.hpp"
#include "surfwarp/primitive.hpp"
#include "surfwarp/surface.hpp"
#include "surfwarp/sweep.hpp"
