#pragma once

#include "capflp/audit.hpp"
#include "capflp/io.hpp"
#include "capflp/mechanisms.hpp"
#include "capflp/model.hpp"
#include "capflp/parallel.hpp"
#include "capflp/ratios.hpp"
#include "capflp/solvers.hpp"
