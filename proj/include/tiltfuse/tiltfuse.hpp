#pragma once

#include "tiltfuse/correction.hpp"
#include "tiltfuse/error.hpp"
#include "tiltfuse/filters.hpp"
#include "tiltfuse/io.hpp"
#include "tiltfuse/metrics.hpp"
#include "tiltfuse/model.hpp"
#include "tiltfuse/numeric.hpp"
#include "tiltfuse/optimize.hpp"
#include "tiltfuse/polynomial.hpp"
#include "tiltfuse/report.hpp"
#include "tiltfuse/sample.hpp"
#include "tiltfuse/text.hpp"
#include "tiltfuse/tuning.hpp"
