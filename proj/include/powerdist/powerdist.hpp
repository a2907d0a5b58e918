#pragma once

#include "powerdist/classification.hpp"
#include "powerdist/distance_matrix.hpp"
#include "powerdist/extended_real.hpp"
#include "powerdist/fixtures.hpp"
#include "powerdist/format.hpp"
#include "powerdist/numerics.hpp"
#include "powerdist/power_triangle.hpp"
#include "powerdist/sequences.hpp"
#include "powerdist/transforms.hpp"
