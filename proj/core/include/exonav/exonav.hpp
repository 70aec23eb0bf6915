#pragma once

#include "exonav/errors.hpp"
#include "exonav/estimation.hpp"
#include "exonav/geometry.hpp"
#include "exonav/io.hpp"
#include "exonav/kinematics.hpp"
#include "exonav/simulation.hpp"
#include "exonav/types.hpp"
