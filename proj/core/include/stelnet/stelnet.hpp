#pragma once

#include "stelnet/analytics.hpp"
#include "stelnet/constrained_mle.hpp"
#include "stelnet/elastic_net.hpp"
#include "stelnet/em_estimator.hpp"
#include "stelnet/errors.hpp"
#include "stelnet/metrics.hpp"
#include "stelnet/model_core.hpp"
#include "stelnet/model_selection.hpp"
#include "stelnet/neighborhood.hpp"
#include "stelnet/netgen.hpp"
#include "stelnet/pipeline.hpp"
#include "stelnet/rng.hpp"
#include "stelnet/samplers.hpp"
