#pragma once

#include "lipfree/delta_detect.hpp"
#include "lipfree/derived_metrics.hpp"
#include "lipfree/error.hpp"
#include "lipfree/free_space.hpp"
#include "lipfree/metric_space.hpp"
#include "lipfree/random_spaces.hpp"
#include "lipfree/rational.hpp"
#include "lipfree/renorm.hpp"
#include "lipfree/veeorg.hpp"
