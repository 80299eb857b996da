#pragma once

#include "slratio/boundary.hpp"
#include "slratio/eigensolver.hpp"
#include "slratio/errors.hpp"
#include "slratio/harness.hpp"
#include "slratio/oracle.hpp"
#include "slratio/potential.hpp"
#include "slratio/pruefer.hpp"
#include "slratio/report_io.hpp"
