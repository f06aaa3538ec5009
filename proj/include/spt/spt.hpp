#pragma once

#include "spt/ankle.hpp"
#include "spt/closure.hpp"
#include "spt/errors.hpp"
#include "spt/estimation.hpp"
#include "spt/fixtures.hpp"
#include "spt/format.hpp"
#include "spt/fourbar.hpp"
#include "spt/impedance.hpp"
#include "spt/jacobian.hpp"
#include "spt/kinematics.hpp"
#include "spt/linalg.hpp"
#include "spt/mechanism.hpp"
#include "spt/simulator.hpp"
#include "spt/torque_derivatives.hpp"
#include "spt/trace_io.hpp"
