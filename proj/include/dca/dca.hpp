#pragma once

#include "dca/arps.hpp"
#include "dca/error.hpp"
#include "dca/fitting.hpp"
#include "dca/forecasting.hpp"
#include "dca/history.hpp"
#include "dca/ingest.hpp"
#include "dca/levenberg_marquardt.hpp"
#include "dca/regression.hpp"
#include "dca/report.hpp"
#include "dca/smoothing.hpp"
