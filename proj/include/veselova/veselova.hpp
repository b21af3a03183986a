#pragma once

#include "veselova/body.hpp"
#include "veselova/errors.hpp"
#include "veselova/frequency.hpp"
#include "veselova/full_dynamics.hpp"
#include "veselova/mass_tensor.hpp"
#include "veselova/reconstruction.hpp"
#include "veselova/reduced_dynamics.hpp"
#include "veselova/second_reduction.hpp"
#include "veselova/son.hpp"
#include "veselova/timeseries.hpp"
