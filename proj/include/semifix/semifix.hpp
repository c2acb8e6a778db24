#pragma once

#include "semifix/common.hpp"
#include "semifix/contraction.hpp"
#include "semifix/finitelab.hpp"
#include "semifix/json_io.hpp"
#include "semifix/mapexpr.hpp"
#include "semifix/solver.hpp"
#include "semifix/space.hpp"
#include "semifix/triangle.hpp"
